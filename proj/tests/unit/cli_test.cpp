#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "ccdp/corpus_json.hpp"
#include "ccdp/report.hpp"
#include "cli.hpp"
#include "test_support.hpp"

namespace ccdp {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ccdp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string eml(const std::string& id, const std::string& from, const std::string& to, const std::string& date,
                const std::string& subject) {
  return "Message-ID: <" + id + ">\r\nFrom: " + from + "\r\nTo: " + to + "\r\nDate: " + date +
         "\r\nSubject: " + subject + "\r\n\r\nbody\r\n";
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ccdp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string corpus() const { return (fs::path(CCDP_FIXTURE_DIR) / "corpus.json").string(); }
  std::string gold() const { return (fs::path(CCDP_FIXTURE_DIR) / "gold.csv").string(); }

  fs::path dir_;
};

TEST_F(CliTest, IngestMboxOfThree) {
  std::string mbox;
  for (int i = 0; i < 3; ++i) {
    mbox += "From someone@example.org Thu Apr 20 10:00:00 2017\n";
    std::string m = eml("m" + std::to_string(i) + "@x", "alice@example.org", "bob@example.org",
                        "Thu, 20 Apr 2017 1" + std::to_string(i) + ":00:00 +0000", "hello");
    m.erase(std::remove(m.begin(), m.end(), '\r'), m.end());
    mbox += m + "\n";
  }
  write(dir_ / "box.mbox", mbox);
  const Result r = run_cli({"ingest", (dir_ / "box.mbox").string(), "-o", (dir_ / "out.json").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("messages: 3"), std::string::npos) << r.out;
  Warnings w;
  EXPECT_EQ(load_corpus_json_file(dir_ / "out.json", w).size(), 3u);
}

TEST_F(CliTest, IngestEmptyDirectoryIsInputError) {
  fs::create_directories(dir_ / "empty");
  const Result r = run_cli({"ingest", (dir_ / "empty").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("EmptyInput"), std::string::npos) << r.err;
}

TEST_F(CliTest, MixedDirectoryDeduplicatesWithWarning) {
  fs::create_directories(dir_ / "mail");
  write(dir_ / "mail" / "a.eml",
        eml("a@x", "alice@example.org", "bob@example.org", "Thu, 20 Apr 2017 10:00:00 +0000", "one"));
  write(dir_ / "mail" / "b.eml",
        eml("b@x", "bob@example.org", "alice@example.org", "Thu, 20 Apr 2017 11:00:00 +0000", "two"));
  write(dir_ / "mail" / "broken.eml", "this is not a message\r\n");
  write(dir_ / "mail" / ".hidden.eml",
        eml("h@x", "alice@example.org", "bob@example.org", "Thu, 20 Apr 2017 12:00:00 +0000", "x"));
  std::string a = eml("a@x", "alice@example.org", "bob@example.org", "Thu, 20 Apr 2017 10:00:00 +0000", "one");
  a.erase(std::remove(a.begin(), a.end(), '\r'), a.end());
  write(dir_ / "dup.mbox", "From x Thu Apr 20 10:00:00 2017\n" + a);
  const Result r = run_cli({"ingest", (dir_ / "mail").string(), (dir_ / "dup.mbox").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("duplicate message id a@x"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("broken.eml"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("messages: 2"), std::string::npos) << r.err;
  Warnings w;
  EXPECT_EQ(load_corpus_json(std::string_view(r.out), w).size(), 2u);
}

TEST_F(CliTest, ThreadsOnFixture) {
  const Result r = run_cli({"threads", corpus(), "--json", dir_.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read(dir_ / "threads.json"));
  EXPECT_NE(r.out.find("ect-0003"), std::string::npos);
}

TEST_F(CliTest, PipelineOnFixture) {
  const Result r = run_cli({"pipeline", corpus(), "--threshold", "0.6", "--gold", gold(), "--json", dir_.string(),
                            "--dot", (dir_ / "extra.dot").string(), "--explain", "A7", "B1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("messages: 11\nects: 3\nlinks: 3\nccdps: 1\n  ccdp-0001: ect-0001 ect-0002 ect-0003\n"),
            std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("compensatory coefficient"), std::string::npos);
  EXPECT_NE(r.out.find("\"msg_a\": \"A7\""), std::string::npos);
  for (const char* f : {"threads.json", "ccdps.json", "eval.json", "graph.dot"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
  EXPECT_EQ(read(dir_ / "graph.dot"), read(dir_ / "extra.dot"));
}

TEST_F(CliTest, LinkIsByteDeterministic) {
  const auto once = [&](const std::string& threads) {
    return run_cli({"link", corpus(), "--threshold", "0.6", "--no-timestamp", "--threads", threads}).out;
  };
  const std::string a = once("1");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, once("1"));
  EXPECT_EQ(a, once("4"));
  EXPECT_EQ(run_cli({"link", corpus()}).out.find("generated_at") != std::string::npos, true);
}

TEST_F(CliTest, ExplainMatchesLibrary) {
  const Result r = run_cli({"explain", corpus(), "A7", "B1"});
  EXPECT_EQ(r.code, 0) << r.err;
  Warnings w;
  const Corpus c = load_corpus_json_file(corpus(), w);
  EXPECT_EQ(r.out, breakdown_to_json("A7", "B1", global_proximity(c.at("A7"), c.at("B1"), {}, TextSimilarity())));
}

TEST_F(CliTest, EvaluateTableAndJson) {
  Result r = run_cli({"evaluate", corpus(), gold()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0.640"), std::string::npos) << r.out;
  r = run_cli({"evaluate", corpus(), gold(), "--format", "json", "--json", dir_.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read(dir_ / "eval.json"));
}

TEST_F(CliTest, ConfigFileAndFlagsOverride) {
  write(dir_ / "cfg.txt", "threshold = 0.95\nhorizon_hours = 10000\n");
  Result r = run_cli({"pipeline", corpus(), "--config", (dir_ / "cfg.txt").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ccdps: 3"), std::string::npos) << r.out;
  r = run_cli({"pipeline", corpus(), "--config", (dir_ / "cfg.txt").string(), "--threshold", "0.6"});
  EXPECT_NE(r.out.find("ccdps: 1"), std::string::npos) << r.out;
  write(dir_ / "bad.txt", "colour = blue\n");
  EXPECT_EQ(run_cli({"pipeline", corpus(), "--config", (dir_ / "bad.txt").string()}).code, 2);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"threads", (dir_ / "missing.json").string()}).code, 2);
  EXPECT_EQ(run_cli({"link", corpus(), "--weights", "1,2"}).code, 2);
  EXPECT_EQ(run_cli({"link", corpus(), "--weights", "0,0,0"}).code, 2);
  EXPECT_EQ(run_cli({"link", corpus(), "--threshold", "abc"}).code, 2);
  EXPECT_EQ(run_cli({"link", corpus(), "--k-hours", "-5"}).code, 2);
  EXPECT_EQ(run_cli({"explain", corpus(), "A1", "nope"}).code, 2);
  EXPECT_EQ(run_cli({"evaluate", corpus(), (dir_ / "missing.csv").string()}).code, 2);
  EXPECT_EQ(run_cli({"link", corpus(), "--vectors", (dir_ / "missing.vec").string()}).code, 2);
}

TEST_F(CliTest, SoftCosineVectors) {
  write(dir_ / "vec.txt", "3 2\nclosure 1 0\nteleconference 0.8 0.6\nreport 0 1\n");
  const Result r = run_cli({"link", corpus(), "--vectors", (dir_ / "vec.txt").string(), "--no-timestamp"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"similarity\": \"soft_cosine\""), std::string::npos) << r.out;
}

}  // namespace
}  // namespace ccdp
