#include "cli.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccdp/corpus.hpp"
#include "ccdp/corpus_json.hpp"
#include "ccdp/ect.hpp"
#include "ccdp/eval.hpp"
#include "ccdp/linker.hpp"
#include "ccdp/mail.hpp"
#include "ccdp/proximity.hpp"
#include "ccdp/report.hpp"
#include "ccdp/semantic.hpp"

namespace ccdp::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config;
  std::string vectors;
  std::optional<double> threshold;
  std::optional<double> k_hours;
  std::string weights;
  std::optional<double> horizon_hours;
  std::string dot;
  std::string json_dir;
  unsigned threads = 0;
  bool idf = false;
  bool no_timestamp = false;
  bool require_conference_link = false;
};

struct Settings {
  ProximityConfig config;
  std::optional<double> horizon_hours;
  std::string vectors;
  bool idf = false;
  unsigned threads = 0;
  std::vector<InputDigest> digests;
};

enum class InputFormat { kEml, kMbox, kJson };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "failed reading " + path.string());
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << data;
  out.close();
  if (!out) throw Error(ErrorCode::kIoFailure, "failed writing " + path.string());
}

InputFormat detect_format(const fs::path& path, std::string_view content) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".json") return InputFormat::kJson;
  if (ext == ".mbox" || ext == ".mbx") return InputFormat::kMbox;
  if (ext == ".eml") return InputFormat::kEml;
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && content[first] == '{') return InputFormat::kJson;
  if (content.substr(0, 5) == "From ") return InputFormat::kMbox;
  return InputFormat::kEml;
}

// Directories are expanded recursively, hidden entries skipped, files visited
// in lexicographic path order.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& raw : inputs) {
    const fs::path path(raw);
    std::error_code ec;
    const auto status = fs::status(path, ec);
    if (ec || !fs::exists(status)) throw Error(ErrorCode::kIoFailure, "no such input: " + raw);
    if (fs::is_directory(status)) {
      std::vector<fs::path> found;
      for (auto it = fs::recursive_directory_iterator(path); it != fs::recursive_directory_iterator(); ++it) {
        if (it->path().filename().string().starts_with(".")) {
          if (it->is_directory()) it.disable_recursion_pending();
          continue;
        }
        if (it->is_regular_file()) found.push_back(it->path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(path);
    }
  }
  return files;
}

struct Loaded {
  Corpus corpus;
  std::vector<InputDigest> digests;
};

Loaded load_inputs(const std::vector<std::string>& inputs, const IngestOptions& options, std::ostream& err) {
  Loaded loaded;
  std::vector<Message> messages;
  Warnings warnings;
  for (const auto& file : expand_inputs(inputs)) {
    const std::string content = read_file(file);
    loaded.digests.push_back({file.generic_string(), sha256_hex(content)});
    switch (detect_format(file, content)) {
      case InputFormat::kJson: {
        Corpus part = load_corpus_json(std::string_view(content), warnings);
        messages.insert(messages.end(), part.messages().begin(), part.messages().end());
        break;
      }
      case InputFormat::kMbox: {
        MboxResult result = parse_mbox(std::string_view(content), options);
        for (const auto& w : result.warnings) {
          warnings.push_back(file.generic_string() + " at byte " + std::to_string(w.byte_offset) + ": " + w.message);
        }
        for (auto& m : result.messages) messages.push_back(std::move(m));
        break;
      }
      case InputFormat::kEml:
        try {
          messages.push_back(parse_eml(content, options));
        } catch (const Error& e) {
          warnings.push_back(file.generic_string() + ": " + e.what());
        }
        break;
    }
  }
  loaded.corpus = Corpus::from_messages(std::move(messages), warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  if (loaded.corpus.empty()) throw Error(ErrorCode::kEmptyInput, "no parseable messages in the inputs");
  return loaded;
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw Error(ErrorCode::kInvalidConfig, "--weights expects three numbers a,b,c");
    }
    values.push_back(v);
  }
  if (values.size() != 3) throw Error(ErrorCode::kInvalidConfig, "--weights expects three numbers a,b,c");
  return values;
}

double parse_number(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size()) {
    throw Error(ErrorCode::kInvalidConfig, key + " is not a number");
  }
  return v;
}

// Config file first, then flags.
Settings resolve_settings(const GlobalOptions& g) {
  Settings s;
  s.threads = g.threads;
  s.idf = g.idf;
  if (!g.config.empty()) {
    std::map<std::string, std::string> extra;
    s.config = load_proximity_config(g.config, {}, &extra);
    s.digests.push_back({fs::path(g.config).generic_string(), sha256_file(g.config)});
    for (const auto& [key, value] : extra) {
      if (key == "horizon_hours") {
        s.horizon_hours = parse_number(key, value);
      } else if (key == "vectors") {
        s.vectors = value;
      } else if (key == "idf") {
        if (value != "true" && value != "false") throw Error(ErrorCode::kInvalidConfig, "idf must be true or false");
        s.idf = value == "true";
      } else {
        throw Error(ErrorCode::kInvalidConfig, "unknown key " + key);
      }
    }
  }
  if (g.threshold) s.config.threshold = *g.threshold;
  if (g.k_hours) s.config.k_hours = *g.k_hours;
  if (!g.weights.empty()) {
    const auto w = parse_weights(g.weights);
    s.config.a = w[0];
    s.config.b = w[1];
    s.config.c = w[2];
  }
  if (g.horizon_hours) s.horizon_hours = *g.horizon_hours;
  if (s.horizon_hours && !(*s.horizon_hours >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "horizon_hours must be non-negative");
  }
  if (!g.vectors.empty()) s.vectors = g.vectors;
  s.config.validate();
  return s;
}

TextSimilarity make_similarity(Settings& s, const Corpus& corpus, std::ostream& err) {
  std::shared_ptr<const SimilarityProvider> provider = std::make_shared<CosineProvider>();
  if (!s.vectors.empty()) {
    std::ifstream in(s.vectors);
    if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + s.vectors);
    Warnings warnings;
    auto model = std::make_shared<WordRelationModel>(load_word_vectors(in, warnings));
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    provider = std::make_shared<SoftCosineProvider>(std::move(model));
    s.digests.push_back({fs::path(s.vectors).generic_string(), sha256_file(s.vectors)});
  }
  if (!s.idf) return TextSimilarity(provider);

  const Tokenizer tokenizer;
  std::vector<TokenBag> documents;
  for (const auto& m : corpus.messages()) {
    std::string text = normalize_subject(m.subject);
    for (const auto& a : m.attachments) text += " " + a;
    documents.push_back(tokenizer(text));
  }
  return TextSimilarity(provider, tokenizer, IdfTable::fit(documents));
}

RunManifest make_manifest(const Settings& s, const TextSimilarity& sim, std::vector<InputDigest> inputs,
                          bool timestamp) {
  RunManifest m;
  m.config = s.config;
  m.similarity = std::string(sim.provider().name());
  m.idf = sim.uses_idf();
  m.horizon_hours = s.horizon_hours;
  m.inputs = std::move(inputs);
  m.inputs.insert(m.inputs.end(), s.digests.begin(), s.digests.end());
  if (timestamp) {
    m.generated_at = format_iso8601(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
  }
  return m;
}

fs::path output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir + ": " + ec.message());
  return fs::path(dir);
}

void print_counts(const Corpus& corpus, std::ostream& out) {
  std::map<MessageKind, std::size_t> counts{
      {MessageKind::kEmail, 0}, {MessageKind::kMeeting, 0}, {MessageKind::kMeetingNotification, 0}};
  for (const auto& m : corpus.messages()) ++counts[m.kind];
  out << "messages: " << corpus.size() << "\n";
  for (const auto& [kind, n] : counts) out << to_string(kind) << ": " << n << "\n";
}

struct Linked {
  std::vector<Ect> ects;
  std::vector<CollaborativeLink> links;
  std::vector<Ccdp> ccdps;
};

Linked link_corpus(const Corpus& corpus, const Settings& s, const TextSimilarity& sim) {
  Linked r;
  r.ects = build_ects(corpus);
  LinkOptions options;
  options.horizon_hours = s.horizon_hours;
  options.threads = s.threads;
  r.links = find_links(corpus, r.ects, s.config, sim, options);
  r.ccdps = build_ccdps(r.ects, r.links);
  return r;
}

std::string explain_pair(const Corpus& corpus, const std::string& a, const std::string& b,
                         const ProximityConfig& cfg, const TextSimilarity& sim) {
  return breakdown_to_json(a, b, global_proximity(corpus.at(a), corpus.at(b), cfg, sim));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reconstruct conversation threads and link them into collaborative conversations", "ccdp"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));

  GlobalOptions g;
  app.add_option("--config", g.config, "Proximity config file (key = value)");
  app.add_option("--vectors", g.vectors, "Word-vector file; selects soft cosine");
  app.add_option("--threshold", g.threshold, "Link threshold on global proximity");
  app.add_option("--k-hours", g.k_hours, "Time proximity decay constant in hours");
  app.add_option("--weights", g.weights, "Sub-proximity weights a,b,c");
  app.add_option("--horizon-hours", g.horizon_hours, "Skip pairs further apart than this");
  app.add_option("--dot", g.dot, "Write a Graphviz graph of the CCDPs");
  app.add_option("--json", g.json_dir, "Directory for JSON reports");
  app.add_option("--threads", g.threads, "Scoring threads (0 = hardware)");
  app.add_flag("--idf", g.idf, "Reweight tokens by inverse document frequency");
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit generated_at from report manifests");
  app.add_flag("--require-conference-link", g.require_conference_link,
               "Only treat calendar parts with a conference URL as meetings");

  std::vector<std::string> inputs;
  std::string output;
  auto* ingest = app.add_subcommand("ingest", "Parse EML, mbox and corpus JSON into one normalized corpus");
  ingest->add_option("inputs", inputs, "Files or directories")->required();
  ingest->add_option("-o,--output", output, "Corpus JSON destination (default stdout)");

  auto* threads = app.add_subcommand("threads", "Group messages into existing conversation threads");
  threads->add_option("inputs", inputs, "Corpus JSON, EML or mbox files")->required();

  auto* link = app.add_subcommand("link", "Link threads into collaborative conversations");
  link->add_option("inputs", inputs, "Corpus JSON, EML or mbox files")->required();

  std::string gold;
  std::string corpus_path;
  std::string format = "table";
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Compare calculated proximity with a gold standard");
  evaluate_cmd->add_option("corpus", corpus_path, "Corpus JSON, EML or mbox file")->required();
  evaluate_cmd->add_option("gold", gold, "Gold-standard CSV")->required();
  evaluate_cmd->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));

  std::vector<std::string> explain_ids;
  auto* pipeline = app.add_subcommand("pipeline", "Threads, links, CCDPs and optional evaluation");
  pipeline->add_option("inputs", inputs, "Corpus JSON, EML or mbox files")->required();
  pipeline->add_option("--gold", gold, "Gold-standard CSV");
  pipeline->add_option("--explain", explain_ids, "Print the proximity breakdown of one pair")->expected(2);

  std::vector<std::string> pair;
  auto* explain = app.add_subcommand("explain", "Proximity breakdown of one message pair");
  explain->add_option("corpus", corpus_path, "Corpus JSON, EML or mbox file")->required();
  explain->add_option("ids", pair, "Two message ids")->required()->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (!corpus_path.empty()) inputs = {corpus_path};

  try {
    IngestOptions ingest_options;
    ingest_options.require_conference_link = g.require_conference_link;

    if (ingest->parsed()) {
      const Loaded loaded = load_inputs(inputs, ingest_options, err);
      const std::string json = corpus_to_json(loaded.corpus);
      if (output.empty()) {
        out << json;
        print_counts(loaded.corpus, err);
      } else {
        write_file(output, json);
        print_counts(loaded.corpus, out);
      }
      return kExitOk;
    }

    Settings settings = resolve_settings(g);
    const Loaded loaded = load_inputs(inputs, ingest_options, err);
    const Corpus& corpus = loaded.corpus;

    if (threads->parsed()) {
      const std::string json = threads_to_json(build_ects(corpus));
      if (!g.json_dir.empty()) write_file(output_dir(g.json_dir) / "threads.json", json);
      out << json;
      return kExitOk;
    }

    const TextSimilarity sim = make_similarity(settings, corpus, err);

    if (explain->parsed()) {
      out << explain_pair(corpus, pair[0], pair[1], settings.config, sim);
      return kExitOk;
    }

    if (evaluate_cmd->parsed()) {
      const GoldStandard gs = load_gold_standard_file(gold);
      auto digests = loaded.digests;
      digests.push_back({fs::path(gold).generic_string(), sha256_file(gold)});
      const RunManifest manifest = make_manifest(settings, sim, digests, !g.no_timestamp);
      const EvalReport report = evaluate(corpus, build_ects(corpus), gs, settings.config, sim);
      const std::string json = eval_to_json(report, &manifest);
      if (!g.json_dir.empty()) write_file(output_dir(g.json_dir) / "eval.json", json);
      out << (format == "json" ? json : render_eval_tables(report));
      return kExitOk;
    }

    const Linked linked = link_corpus(corpus, settings, sim);

    if (link->parsed()) {
      const RunManifest manifest = make_manifest(settings, sim, loaded.digests, !g.no_timestamp);
      const std::string json = ccdps_to_json(linked.ccdps, &manifest);
      if (!g.json_dir.empty()) write_file(output_dir(g.json_dir) / "ccdps.json", json);
      if (!g.dot.empty()) write_file(g.dot, ccdps_to_dot(linked.ects, linked.ccdps));
      out << json;
      return kExitOk;
    }

    // pipeline
    std::optional<GoldStandard> gs;
    auto digests = loaded.digests;
    if (!gold.empty()) {
      gs = load_gold_standard_file(gold);
      digests.push_back({fs::path(gold).generic_string(), sha256_file(gold)});
    }
    const RunManifest manifest = make_manifest(settings, sim, digests, !g.no_timestamp);
    const std::string dot = ccdps_to_dot(linked.ects, linked.ccdps);
    std::optional<EvalReport> report;
    if (gs) report = evaluate(corpus, linked.ects, *gs, settings.config, sim);

    if (!g.json_dir.empty()) {
      const fs::path dir = output_dir(g.json_dir);
      write_file(dir / "threads.json", threads_to_json(linked.ects));
      write_file(dir / "ccdps.json", ccdps_to_json(linked.ccdps, &manifest));
      if (report) write_file(dir / "eval.json", eval_to_json(*report, &manifest));
      write_file(dir / "graph.dot", dot);
    }
    if (!g.dot.empty()) write_file(g.dot, dot);

    out << "messages: " << corpus.size() << "\n";
    out << "ects: " << linked.ects.size() << "\n";
    out << "links: " << linked.links.size() << "\n";
    out << "ccdps: " << linked.ccdps.size() << "\n";
    for (const auto& c : linked.ccdps) {
      out << "  " << c.ccdp_id << ":";
      for (const auto& id : c.ect_ids) out << " " << id;
      out << "\n";
    }
    if (report) out << "\n" << render_eval_tables(*report);
    if (!explain_ids.empty()) out << "\n" << explain_pair(corpus, explain_ids[0], explain_ids[1], settings.config, sim);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace ccdp::cli
