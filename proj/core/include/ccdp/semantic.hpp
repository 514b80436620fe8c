#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccdp/error.hpp"

namespace ccdp {

/// Weighted multiset of normalized tokens. Weights are non-negative; tokens
/// are kept sorted so every traversal is deterministic.
class TokenBag {
 public:
  using Map = std::map<std::string, double, std::less<>>;

  TokenBag() = default;
  TokenBag(std::initializer_list<std::pair<const std::string, double>> init);

  /// Throws std::invalid_argument for negative or non-finite weights.
  void add(std::string_view token, double weight = 1.0);
  void set(std::string_view token, double weight);
  double weight(std::string_view token) const noexcept;

  bool empty() const noexcept { return weights_.empty(); }
  std::size_t size() const noexcept { return weights_.size(); }
  const Map& entries() const noexcept { return weights_; }
  auto begin() const noexcept { return weights_.begin(); }
  auto end() const noexcept { return weights_.end(); }

  friend bool operator==(const TokenBag&, const TokenBag&) = default;
  friend auto operator<=>(const TokenBag& a, const TokenBag& b) { return a.weights_ <=> b.weights_; }

 private:
  Map weights_;
};

const std::set<std::string, std::less<>>& english_stopwords();
const std::set<std::string, std::less<>>& french_stopwords();
std::set<std::string, std::less<>> default_stopwords();  // union of both

/// Lowercases ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic letters in
/// UTF-8 text. Other code points pass through unchanged.
std::string to_lower_utf8(std::string_view text);

struct TokenizerOptions {
  std::size_t min_length = 2;  // in code points
  std::set<std::string, std::less<>> stopwords = default_stopwords();
};

/// Lowercases, splits on anything that is not a letter or digit, drops short
/// tokens and stopwords, and weights each token by its term frequency.
class Tokenizer {
 public:
  Tokenizer() = default;
  explicit Tokenizer(TokenizerOptions options) : options_(std::move(options)) {}

  TokenBag operator()(std::string_view text) const;
  const TokenizerOptions& options() const noexcept { return options_; }

 private:
  TokenizerOptions options_;
};

TokenBag tokenize(std::string_view text);

/// Smoothed inverse document frequency: ln((1 + N) / (1 + df)) + 1.
class IdfTable {
 public:
  static IdfTable fit(std::span<const TokenBag> documents);
  double idf(std::string_view token) const noexcept;
  TokenBag apply(const TokenBag& bag) const;
  std::size_t document_count() const noexcept { return documents_; }

 private:
  std::size_t documents_ = 0;
  std::unordered_map<std::string, std::size_t> document_frequency_;
};

/// Plain cosine over the token union; 0 when either bag is empty.
double cosine_similarity(const TokenBag& a, const TokenBag& b);

/// Pairwise token relation in [0,1], symmetric, 1 on the diagonal.
using RelationFn = std::function<double(std::string_view, std::string_view)>;

/// Word vectors backing the soft-cosine relation
///   relation(s, t) = max(0, cos(vec(s), vec(t)))^2,  relation(t, t) = 1,
/// with out-of-vocabulary tokens related only to themselves.
class WordRelationModel {
 public:
  WordRelationModel() = default;

  /// Tokens are lowercased like the tokenizer does. Throws
  /// Error(kModelDimensionMismatch) when vectors differ in length. A later
  /// duplicate token is ignored and reported in `warnings`.
  static WordRelationModel from_vectors(
      std::vector<std::pair<std::string, std::vector<double>>> vectors, Warnings& warnings);
  static WordRelationModel from_vectors(
      std::vector<std::pair<std::string, std::vector<double>>> vectors);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return index_.size(); }
  bool contains(std::string_view token) const;

  double relation(std::string_view a, std::string_view b) const;

 private:
  const double* unit_vector(std::string_view token) const;

  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> unit_;  // row-major, size() x dimension_
  std::vector<bool> zero_;    // zero vectors relate to nothing but themselves
};

/// Textual word-vector format: header "count dim", then "token v1 ... vd".
/// Throws Error(kMalformedVectorFile) with the offending line number.
WordRelationModel load_word_vectors(std::istream& in, Warnings& warnings);
WordRelationModel load_word_vectors_file(const std::filesystem::path& path, Warnings& warnings);

/// x^T M y / sqrt(x^T M x * y^T M y) over the token union, clamped to [0,1];
/// 0 when either bag is empty.
double soft_cosine_similarity(const TokenBag& a, const TokenBag& b, const WordRelationModel& model);
double soft_cosine_similarity(const TokenBag& a, const TokenBag& b, const RelationFn& relation);

/// Bag-to-bag similarity in [0,1]: symmetric, 1 for identical non-empty bags,
/// 0 if either bag is empty.
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual double similarity(const TokenBag& a, const TokenBag& b) const = 0;
  virtual std::string_view name() const noexcept = 0;
};

class CosineProvider final : public SimilarityProvider {
 public:
  double similarity(const TokenBag& a, const TokenBag& b) const override;
  std::string_view name() const noexcept override { return "cosine"; }
};

class SoftCosineProvider final : public SimilarityProvider {
 public:
  explicit SoftCosineProvider(std::shared_ptr<const WordRelationModel> model);
  double similarity(const TokenBag& a, const TokenBag& b) const override;
  std::string_view name() const noexcept override { return "soft_cosine"; }
  const WordRelationModel& model() const noexcept { return *model_; }

 private:
  std::shared_ptr<const WordRelationModel> model_;
};

/// Text-level front end used by the proximity measures: tokenization,
/// optional IDF reweighting, then the configured provider.
class TextSimilarity {
 public:
  TextSimilarity();  // exact cosine, default tokenizer, TF weights
  explicit TextSimilarity(std::shared_ptr<const SimilarityProvider> provider,
                          Tokenizer tokenizer = {}, std::optional<IdfTable> idf = std::nullopt);

  TokenBag bag(std::string_view text) const;
  double operator()(const TokenBag& a, const TokenBag& b) const;
  double texts(std::string_view a, std::string_view b) const;

  const SimilarityProvider& provider() const noexcept { return *provider_; }
  const Tokenizer& tokenizer() const noexcept { return tokenizer_; }
  bool uses_idf() const noexcept { return idf_.has_value(); }

 private:
  std::shared_ptr<const SimilarityProvider> provider_;
  Tokenizer tokenizer_;
  std::optional<IdfTable> idf_;
};

}  // namespace ccdp
