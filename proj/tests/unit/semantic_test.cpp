#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ccdp/semantic.hpp"
#include "test_support.hpp"

namespace ccdp {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ccdp::Error thrown";
  return ErrorCode::kIoFailure;
}

const std::vector<std::string> kVocabulary = {"closure", "launch", "budget", "report", "slides",
                                              "minutes", "draft", "final", "review", "board"};

TEST(TokenBag, RejectsNegativeWeights) {
  TokenBag bag;
  EXPECT_THROW(bag.add("x", -1.0), std::invalid_argument);
  EXPECT_THROW(bag.set("x", std::nan("")), std::invalid_argument);
  bag.add("x");
  bag.add("x", 2.0);
  EXPECT_DOUBLE_EQ(bag.weight("x"), 3.0);
  EXPECT_DOUBLE_EQ(bag.weight("y"), 0.0);
}

TEST(Tokenize, Empty) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, StopwordsShortTokensAndFrequency) {
  const TokenBag bag = tokenize("Closure of Project X \xE2\x80\x94 closure report");
  EXPECT_EQ(bag, (TokenBag{{"closure", 2.0}, {"project", 1.0}, {"report", 1.0}}));
}

TEST(Tokenize, CaseInsensitive) {
  const TokenBag bag = tokenize("ABC abc");
  ASSERT_EQ(bag.size(), 1u);
  EXPECT_DOUBLE_EQ(bag.weight("abc"), 2.0);
}

TEST(Tokenize, UnicodeLettersAndFrenchStopwords) {
  EXPECT_EQ(tokenize("Clôture du PROJET Hermès, été"), (TokenBag{{"clôture", 1.0}, {"projet", 1.0}, {"hermès", 1.0}}));
  EXPECT_EQ(tokenize("ΑΒΓ абв"), (TokenBag{{"αβγ", 1.0}, {"абв", 1.0}}));
}

TEST(Tokenize, AttachmentNamesKeepExtensions) {
  EXPECT_EQ(tokenize("Hermes closure_v1.pptx"),
            (TokenBag{{"hermes", 1.0}, {"closure", 1.0}, {"v1", 1.0}, {"pptx", 1.0}}));
}

TEST(Tokenize, ConfigurableOptions) {
  TokenizerOptions options;
  options.min_length = 1;
  options.stopwords = {"project"};
  EXPECT_EQ(Tokenizer(options)("Project X"), (TokenBag{{"x", 1.0}}));
}

TEST(ToLowerUtf8, Scripts) {
  EXPECT_EQ(to_lower_utf8("ÀÉÎÕÜ ŒŠ ΣΩ ЖЯ ABC"), "àéîõü œš σω жя abc");
}

TEST(Cosine, Examples) {
  const TokenBag ab{{"a", 1.0}, {"b", 1.0}};
  const TokenBag a{{"a", 1.0}};
  EXPECT_DOUBLE_EQ(cosine_similarity(ab, ab), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, TokenBag{{"z", 1.0}}), 0.0);
  EXPECT_NEAR(cosine_similarity(ab, a), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(cosine_similarity(TokenBag{}, a), 0.0);
}

WordRelationModel toy_model() {
  return WordRelationModel::from_vectors({
      {"closure", {1.0, 0.0}},
      {"launch", {1.0, 1.0}},
      {"budget", {0.0, 1.0}},
      {"minutes", {-1.0, 0.2}},
  });
}

TEST(WordRelationModel, RelationDefinition) {
  const auto model = toy_model();
  EXPECT_EQ(model.size(), 4u);
  EXPECT_EQ(model.dimension(), 2u);
  EXPECT_DOUBLE_EQ(model.relation("closure", "closure"), 1.0);
  EXPECT_NEAR(model.relation("closure", "launch"), 0.5, 1e-15);
  EXPECT_NEAR(model.relation("launch", "closure"), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(model.relation("closure", "budget"), 0.0);
  EXPECT_DOUBLE_EQ(model.relation("closure", "minutes"), 0.0);
  EXPECT_DOUBLE_EQ(model.relation("closure", "unknown"), 0.0);
  EXPECT_DOUBLE_EQ(model.relation("unknown", "unknown"), 1.0);
}

TEST(WordRelationModel, DimensionMismatch) {
  EXPECT_EQ(code_of([] { WordRelationModel::from_vectors({{"a", {1.0, 0.0}}, {"b", {1.0}}}); }),
            ErrorCode::kModelDimensionMismatch);
}

TEST(WordRelationModel, DuplicateKeepsFirstWithWarning) {
  Warnings w;
  const auto model = WordRelationModel::from_vectors({{"a", {1.0, 0.0}}, {"b", {1.0, 0.0}}, {"A", {0.0, 1.0}}}, w);
  EXPECT_EQ(model.size(), 2u);
  EXPECT_EQ(w.size(), 1u);
  EXPECT_DOUBLE_EQ(model.relation("a", "b"), 1.0);
}

TEST(LoadWordVectors, TwoTokens) {
  std::istringstream in("2 2\nclosure 1 0\nlaunch 0.5 0.5\n");
  Warnings w;
  const auto model = load_word_vectors(in, w);
  EXPECT_EQ(model.size(), 2u);
  EXPECT_TRUE(model.contains("launch"));
}

TEST(LoadWordVectors, WrongComponentCountNamesLine) {
  std::istringstream in("2 2\nclosure 1 0\nlaunch 0.5\n");
  Warnings w;
  try {
    load_word_vectors(in, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedVectorFile);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(LoadWordVectors, TooFewLines) {
  std::istringstream in("3 2\na 1 0\nb 0 1\n");
  Warnings w;
  EXPECT_EQ(code_of([&] { load_word_vectors(in, w); }), ErrorCode::kMalformedVectorFile);
}

TEST(LoadWordVectors, BadHeaderAndNumbers) {
  Warnings w;
  std::istringstream empty("");
  EXPECT_EQ(code_of([&] { load_word_vectors(empty, w); }), ErrorCode::kMalformedVectorFile);
  std::istringstream header("two 2\n");
  EXPECT_EQ(code_of([&] { load_word_vectors(header, w); }), ErrorCode::kMalformedVectorFile);
  std::istringstream number("1 2\na 1 zz\n");
  EXPECT_EQ(code_of([&] { load_word_vectors(number, w); }), ErrorCode::kMalformedVectorFile);
}

TEST(LoadWordVectors, MissingFileIsIoFailure) {
  Warnings w;
  EXPECT_EQ(code_of([&] { load_word_vectors_file("/nonexistent.vec", w); }), ErrorCode::kIoFailure);
}

TEST(SoftCosine, Examples) {
  const auto model = toy_model();
  const TokenBag x{{"closure", 1.0}, {"budget", 2.0}};
  EXPECT_DOUBLE_EQ(soft_cosine_similarity(x, x, model), 1.0);
  EXPECT_DOUBLE_EQ(soft_cosine_similarity(TokenBag{{"oov1", 1.0}}, TokenBag{{"oov2", 1.0}}, model), 0.0);
  EXPECT_DOUBLE_EQ(soft_cosine_similarity(TokenBag{}, x, model), 0.0);
}

TEST(SoftCosine, RelatedDisjointBagsMatchDenseOracle) {
  const auto model = toy_model();
  const TokenBag x{{"closure", 1.0}};
  const TokenBag y{{"launch", 1.0}};
  const auto rel = [&](const std::string& s, const std::string& t) { return model.relation(s, t); };
  EXPECT_NEAR(soft_cosine_similarity(x, y, model), 0.5, 1e-12);
  EXPECT_NEAR(soft_cosine_similarity(x, y, model), testing::dense_soft_cosine(x, y, rel), 1e-12);
}

TEST(SoftCosine, DenseOracleOnToyVocabularies) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> component(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::vector<std::string> vocab(kVocabulary.begin(), kVocabulary.begin() + 5);
    std::vector<std::pair<std::string, std::vector<double>>> vectors;
    for (std::size_t i = 0; i + 1 < vocab.size(); ++i) {  // last token stays out of vocabulary
      vectors.push_back({vocab[i], {component(rng), component(rng), component(rng)}});
    }
    const auto model = WordRelationModel::from_vectors(vectors);
    const TokenBag a = testing::random_bag(rng, vocab, 4);
    const TokenBag b = testing::random_bag(rng, vocab, 4);
    const auto rel = [&](const std::string& s, const std::string& t) { return model.relation(s, t); };
    EXPECT_NEAR(soft_cosine_similarity(a, b, model), testing::dense_soft_cosine(a, b, rel), 1e-9);
  }
}

TEST(SoftCosine, IdentityRelationEqualsCosine) {
  std::mt19937_64 rng(43);
  const RelationFn identity = [](std::string_view s, std::string_view t) { return s == t ? 1.0 : 0.0; };
  for (int trial = 0; trial < 1000; ++trial) {
    const TokenBag a = testing::random_bag(rng, kVocabulary, 6);
    const TokenBag b = testing::random_bag(rng, kVocabulary, 6);
    EXPECT_NEAR(soft_cosine_similarity(a, b, identity), cosine_similarity(a, b), 1e-12);
  }
}

TEST(SoftCosine, BoundedSymmetricSelfOne) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> component(-1.0, 1.0);
  std::vector<std::pair<std::string, std::vector<double>>> vectors;
  for (const auto& t : kVocabulary) vectors.push_back({t, {component(rng), component(rng)}});
  const auto model = WordRelationModel::from_vectors(vectors);
  for (int trial = 0; trial < 500; ++trial) {
    const TokenBag a = testing::random_bag(rng, kVocabulary, 5);
    const TokenBag b = testing::random_bag(rng, kVocabulary, 5);
    const double s = soft_cosine_similarity(a, b, model);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_EQ(s, soft_cosine_similarity(b, a, model));
    if (!a.empty()) EXPECT_DOUBLE_EQ(soft_cosine_similarity(a, a, model), 1.0);
  }
}

TEST(SoftCosine, MonotoneInCrossRelation) {
  const TokenBag a{{"closure", 1.0}, {"slides", 2.0}};
  const TokenBag b{{"launch", 3.0}, {"board", 1.0}};
  double previous = -1.0;
  for (int step = 0; step <= 20; ++step) {
    const double r = step / 20.0;
    const RelationFn rel = [r](std::string_view s, std::string_view t) {
      if (s == t) return 1.0;
      const bool pair = (s == "closure" && t == "launch") || (s == "launch" && t == "closure");
      return pair ? r : 0.0;
    };
    const double score = soft_cosine_similarity(a, b, rel);
    EXPECT_GE(score, previous);
    previous = score;
  }
  EXPECT_GT(previous, 0.0);
}

TEST(SoftCosine, ClampsRelationFunction) {
  const RelationFn wild = [](std::string_view s, std::string_view t) { return s == t ? 1.0 : 7.0; };
  const double s = soft_cosine_similarity(TokenBag{{"a", 1.0}}, TokenBag{{"b", 1.0}}, wild);
  EXPECT_DOUBLE_EQ(s, 1.0);
}

TEST(Idf, SmoothedFormula) {
  const std::vector<TokenBag> docs = {tokenize("closure budget"), tokenize("closure report"), tokenize("slides")};
  const IdfTable idf = IdfTable::fit(docs);
  EXPECT_EQ(idf.document_count(), 3u);
  EXPECT_NEAR(idf.idf("closure"), std::log(4.0 / 3.0) + 1.0, 1e-15);
  EXPECT_NEAR(idf.idf("budget"), std::log(2.0) + 1.0, 1e-15);
  EXPECT_NEAR(idf.idf("never"), std::log(4.0) + 1.0, 1e-15);
  EXPECT_NEAR(idf.apply(tokenize("closure closure")).weight("closure"), 2.0 * (std::log(4.0 / 3.0) + 1.0), 1e-15);
}

TEST(TextSimilarity, DefaultsToCosine) {
  const TextSimilarity sim;
  EXPECT_EQ(sim.provider().name(), "cosine");
  EXPECT_FALSE(sim.uses_idf());
  EXPECT_DOUBLE_EQ(sim.texts("Project closure", "project CLOSURE"), 1.0);
  EXPECT_DOUBLE_EQ(sim.texts("", "closure"), 0.0);
}

TEST(TextSimilarity, SoftCosineProvider) {
  const TextSimilarity sim(std::make_shared<SoftCosineProvider>(std::make_shared<WordRelationModel>(toy_model())));
  EXPECT_EQ(sim.provider().name(), "soft_cosine");
  EXPECT_NEAR(sim.texts("closure", "launch"), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(TextSimilarity().texts("closure", "launch"), 0.0);
}

}  // namespace
}  // namespace ccdp
