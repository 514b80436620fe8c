#include <benchmark/benchmark.h>

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ccdp/ect.hpp"
#include "ccdp/linker.hpp"
#include "ccdp/semantic.hpp"

namespace {

using namespace ccdp;

const std::vector<std::string> kWords = {"closure", "budget", "report", "slides", "review", "board", "meeting",
                                         "teleconference", "draft", "final", "project", "minutes", "agenda",
                                         "partner", "deadline", "contract", "design", "planning", "summary"};

std::string words(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<std::size_t> pick(0, kWords.size() - 1);
  std::string out;
  for (int i = 0; i < n; ++i) out += (i ? " " : "") + kWords[pick(rng)];
  return out;
}

Corpus synthetic_corpus(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> person(0, 29);
  std::uniform_int_distribution<long> secs(0, 365L * 86400);
  std::bernoulli_distribution reply(0.6);
  std::vector<Message> messages;
  for (std::size_t i = 0; i < n; ++i) {
    Message m;
    char id[32];
    std::snprintf(id, sizeof id, "m%05zu@bench", i);
    m.id = id;
    const int from = person(rng);
    m.from = Interlocutor("p" + std::to_string(from) + "@bench.org");
    for (int k = 0; k < 3; ++k) {
      const int to = person(rng);
      if (to != from) m.to.emplace_back("p" + std::to_string(to) + "@bench.org");
    }
    if (m.to.empty()) m.to.emplace_back("p" + std::to_string((from + 1) % 30) + "@bench.org");
    m.sent_at = Timestamp(std::chrono::seconds(1483228800 + secs(rng)));
    m.subject = words(rng, 4);
    m.attachments = {words(rng, 2) + ".pptx"};
    if (i > 0 && reply(rng)) m.in_reply_to = messages[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)].id;
    messages.push_back(std::move(m));
  }
  Warnings warnings;
  return Corpus::from_messages(std::move(messages), warnings);
}

void BM_Cosine(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const TokenBag a = tokenize(words(rng, 8));
  const TokenBag b = tokenize(words(rng, 8));
  for (auto _ : state) benchmark::DoNotOptimize(cosine_similarity(a, b));
}
BENCHMARK(BM_Cosine);

void BM_SoftCosine(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<std::pair<std::string, std::vector<double>>> vectors;
  for (const auto& w : kWords) {
    std::vector<double> v(static_cast<std::size_t>(state.range(0)));
    for (auto& x : v) x = g(rng);
    vectors.emplace_back(w, std::move(v));
  }
  const auto model = WordRelationModel::from_vectors(vectors);
  const TokenBag a = tokenize(words(rng, 8));
  const TokenBag b = tokenize(words(rng, 8));
  for (auto _ : state) benchmark::DoNotOptimize(soft_cosine_similarity(a, b, model));
}
BENCHMARK(BM_SoftCosine)->Arg(50)->Arg(300);

void BM_BuildEcts(benchmark::State& state) {
  const Corpus corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_ects(corpus));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildEcts)->Arg(1000)->Arg(10000);

void BM_FindLinks(benchmark::State& state) {
  const Corpus corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)));
  const auto ects = build_ects(corpus);
  ProximityConfig cfg;
  cfg.threshold = 0.6;
  const TextSimilarity sim;
  LinkOptions options;
  options.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(find_links(corpus, ects, cfg, sim, options));
  const auto n = state.range(0);
  state.SetItemsProcessed(state.iterations() * n * (n - 1) / 2);
}
BENCHMARK(BM_FindLinks)->Args({500, 1})->Args({500, 4})->Args({2000, 1})->Args({2000, 4})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
