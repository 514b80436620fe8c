#include "ccdp/semantic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ccdp {

// ---------------------------------------------------------------------------
// TokenBag

TokenBag::TokenBag(std::initializer_list<std::pair<const std::string, double>> init) {
  for (const auto& [token, weight] : init) add(token, weight);
}

void TokenBag::add(std::string_view token, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("token weight must be finite and non-negative");
  }
  auto it = weights_.find(token);
  if (it == weights_.end()) {
    weights_.emplace(std::string(token), weight);
  } else {
    it->second += weight;
  }
}

void TokenBag::set(std::string_view token, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("token weight must be finite and non-negative");
  }
  auto it = weights_.find(token);
  if (it == weights_.end()) {
    weights_.emplace(std::string(token), weight);
  } else {
    it->second = weight;
  }
}

double TokenBag::weight(std::string_view token) const noexcept {
  const auto it = weights_.find(token);
  return it == weights_.end() ? 0.0 : it->second;
}

// ---------------------------------------------------------------------------
// Stopwords

const std::set<std::string, std::less<>>& english_stopwords() {
  static const std::set<std::string, std::less<>> words = {
      "a",     "about", "above", "after", "again", "against", "all",   "am",    "an",    "and",
      "any",   "are",   "as",    "at",    "be",    "because", "been",  "before", "being", "below",
      "between", "both", "but",  "by",    "can",   "could",   "did",   "do",    "does",  "doing",
      "down",  "during", "each", "few",   "for",   "from",    "further", "had", "has",   "have",
      "having", "he",   "her",   "here",  "hers",  "herself", "him",   "himself", "his", "how",
      "i",     "if",    "in",    "into",  "is",    "it",      "its",   "itself", "just", "me",
      "more",  "most",  "my",    "myself", "no",   "nor",     "not",   "now",   "of",    "off",
      "on",    "once",  "only",  "or",    "other", "our",     "ours",  "ourselves", "out", "over",
      "own",   "same",  "she",   "should", "so",   "some",    "such",  "than",  "that",  "the",
      "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those",
      "through", "to",  "too",   "under", "until", "up",      "very",  "was",   "we",    "were",
      "what",  "when",  "where", "which", "while", "who",     "whom",  "why",   "will",  "with",
      "would", "you",   "your",  "yours", "yourself", "yourselves"};
  return words;
}

const std::set<std::string, std::less<>>& french_stopwords() {
  static const std::set<std::string, std::less<>> words = {
      "au",    "aux",   "avec",  "ce",    "ces",   "cette",  "dans",  "de",    "des",   "du",
      "elle",  "en",    "et",    "eux",   "il",    "ils",    "je",    "la",    "le",    "les",
      "leur",  "leurs", "lui",   "ma",    "mais",  "me",     "même",  "mes",   "moi",   "mon",
      "ne",    "nos",   "notre", "nous",  "on",    "ou",     "où",    "par",   "pas",   "pour",
      "qu",    "que",   "qui",   "sa",    "se",    "ses",    "son",   "sur",   "ta",    "te",
      "tes",   "toi",   "ton",   "tu",    "un",    "une",    "vos",   "votre", "vous",  "est",
      "sont",  "été",   "être",  "avoir", "ai",    "as",     "avons", "avez",  "ont",   "suis",
      "es",    "sommes", "êtes", "ceci",  "cela",  "ça",     "si",    "plus",  "très",  "aussi"};
  return words;
}

std::set<std::string, std::less<>> default_stopwords() {
  std::set<std::string, std::less<>> all = english_stopwords();
  all.insert(french_stopwords().begin(), french_stopwords().end());
  return all;
}

// ---------------------------------------------------------------------------
// UTF-8 helpers

namespace {

// Decodes one code point; invalid bytes decode as U+FFFD and advance by one.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  const auto continuation = [&](std::size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0 && continuation(1)) {
    const char32_t cp = ((b0 & 0x1F) << 6) | (static_cast<unsigned char>(s[i + 1]) & 0x3F);
    i += 2;
    return cp;
  }
  if ((b0 & 0xF0) == 0xE0 && continuation(1) && continuation(2)) {
    const char32_t cp = ((b0 & 0x0F) << 12) | ((static_cast<unsigned char>(s[i + 1]) & 0x3F) << 6) |
                        (static_cast<unsigned char>(s[i + 2]) & 0x3F);
    i += 3;
    return cp;
  }
  if ((b0 & 0xF8) == 0xF0 && continuation(1) && continuation(2) && continuation(3)) {
    const char32_t cp = ((b0 & 0x07) << 18) | ((static_cast<unsigned char>(s[i + 1]) & 0x3F) << 12) |
                        ((static_cast<unsigned char>(s[i + 2]) & 0x3F) << 6) |
                        (static_cast<unsigned char>(s[i + 3]) & 0x3F);
    i += 4;
    return cp;
  }
  ++i;
  return 0xFFFD;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t lower_code_point(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  return cp;
}

bool is_word_code_point(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x370 && cp <= 0x3FF) return cp != 0x37E && cp != 0x387;
  if (cp >= 0x400 && cp <= 0x52F) return true;
  return false;
}

}  // namespace

std::string to_lower_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) append_utf8(out, lower_code_point(next_code_point(text, i)));
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer

TokenBag Tokenizer::operator()(std::string_view text) const {
  TokenBag bag;
  std::string token;
  std::size_t token_length = 0;
  const auto flush = [&] {
    if (token_length >= options_.min_length && options_.stopwords.count(token) == 0) bag.add(token);
    token.clear();
    token_length = 0;
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = next_code_point(text, i);
    if (is_word_code_point(cp)) {
      append_utf8(token, lower_code_point(cp));
      ++token_length;
    } else {
      flush();
    }
  }
  flush();
  return bag;
}

TokenBag tokenize(std::string_view text) {
  static const Tokenizer tokenizer;
  return tokenizer(text);
}

// ---------------------------------------------------------------------------
// IDF

IdfTable IdfTable::fit(std::span<const TokenBag> documents) {
  IdfTable table;
  table.documents_ = documents.size();
  for (const auto& doc : documents) {
    for (const auto& [token, weight] : doc) {
      if (weight > 0.0) ++table.document_frequency_[token];
    }
  }
  return table;
}

double IdfTable::idf(std::string_view token) const noexcept {
  const auto it = document_frequency_.find(std::string(token));
  const double df = it == document_frequency_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((1.0 + static_cast<double>(documents_)) / (1.0 + df)) + 1.0;
}

TokenBag IdfTable::apply(const TokenBag& bag) const {
  TokenBag out;
  for (const auto& [token, weight] : bag) out.set(token, weight * idf(token));
  return out;
}

// ---------------------------------------------------------------------------
// Cosine

double cosine_similarity(const TokenBag& a, const TokenBag& b) {
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [token, w] : a) na += w * w;
  for (const auto& [token, w] : b) nb += w * w;
  // Merge walk over the sorted token union.
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Word relation model

WordRelationModel WordRelationModel::from_vectors(
    std::vector<std::pair<std::string, std::vector<double>>> vectors, Warnings& warnings) {
  WordRelationModel model;
  if (vectors.empty()) return model;
  model.dimension_ = vectors.front().second.size();
  for (auto& [raw_token, vec] : vectors) {
    if (vec.size() != model.dimension_) {
      throw Error(ErrorCode::kModelDimensionMismatch,
                  "vector for \"" + raw_token + "\" has " + std::to_string(vec.size()) +
                      " components, expected " + std::to_string(model.dimension_));
    }
    std::string token = to_lower_utf8(raw_token);
    if (model.index_.count(token) != 0) {
      warnings.push_back("duplicate token \"" + token + "\" ignored");
      continue;
    }
    double norm = 0.0;
    for (double v : vec) norm += v * v;
    norm = std::sqrt(norm);
    model.index_.emplace(std::move(token), model.zero_.size());
    model.zero_.push_back(norm == 0.0);
    for (double v : vec) model.unit_.push_back(norm == 0.0 ? 0.0 : v / norm);
  }
  return model;
}

WordRelationModel WordRelationModel::from_vectors(
    std::vector<std::pair<std::string, std::vector<double>>> vectors) {
  Warnings ignored;
  return from_vectors(std::move(vectors), ignored);
}

bool WordRelationModel::contains(std::string_view token) const {
  return index_.count(std::string(token)) != 0;
}

const double* WordRelationModel::unit_vector(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end() || zero_[it->second]) return nullptr;
  return unit_.data() + it->second * dimension_;
}

double WordRelationModel::relation(std::string_view a, std::string_view b) const {
  if (a == b) return 1.0;
  const double* va = unit_vector(a);
  const double* vb = unit_vector(b);
  if (va == nullptr || vb == nullptr) return 0.0;
  double dot = 0.0;
  for (std::size_t k = 0; k < dimension_; ++k) dot += va[k] * vb[k];
  const double positive = std::clamp(dot, 0.0, 1.0);
  return positive * positive;
}

WordRelationModel load_word_vectors(std::istream& in, Warnings& warnings) {
  const auto fail = [](std::size_t line_no, const std::string& what) {
    return Error(ErrorCode::kMalformedVectorFile, "line " + std::to_string(line_no) + ": " + what);
  };
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw fail(1, "missing \"count dim\" header");
  ++line_no;
  std::size_t count = 0;
  std::size_t dim = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> count >> dim) || (header >> extra) || dim == 0) {
      throw fail(line_no, "expected header \"count dim\"");
    }
  }
  std::vector<std::pair<std::string, std::vector<double>>> vectors;
  vectors.reserve(count);
  while (vectors.size() < count && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream row(line);
    std::string token;
    row >> token;
    std::vector<double> values;
    std::string field;
    while (row >> field) {
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end != field.c_str() + field.size() || !std::isfinite(v)) {
        throw fail(line_no, "not a number: \"" + field + "\"");
      }
      values.push_back(v);
    }
    if (values.size() != dim) {
      throw fail(line_no, "expected " + std::to_string(dim) + " components, found " +
                              std::to_string(values.size()));
    }
    vectors.emplace_back(std::move(token), std::move(values));
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "failed reading vector stream");
  if (vectors.size() < count) {
    throw fail(line_no + 1, "header announces " + std::to_string(count) + " vectors, found " +
                                std::to_string(vectors.size()));
  }
  return WordRelationModel::from_vectors(std::move(vectors), warnings);
}

WordRelationModel load_word_vectors_file(const std::filesystem::path& path, Warnings& warnings) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return load_word_vectors(in, warnings);
}

// ---------------------------------------------------------------------------
// Soft cosine

namespace {

template <typename Relation>
double soft_cosine_impl(const TokenBag& a, const TokenBag& b, Relation&& relation) {
  if (a.empty() || b.empty()) return 0.0;
  // Canonical argument order makes the result bit-for-bit symmetric.
  const TokenBag& x = a <= b ? a : b;
  const TokenBag& y = a <= b ? b : a;

  std::vector<std::string_view> tokens;
  for (const auto& [t, w] : x) tokens.push_back(t);
  for (const auto& [t, w] : y) tokens.push_back(t);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());

  const std::size_t n = tokens.size();
  std::vector<double> xv(n), yv(n);
  for (std::size_t i = 0; i < n; ++i) {
    xv[i] = x.weight(tokens[i]);
    yv[i] = y.weight(tokens[i]);
  }
  double xy = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Diagonal first, then each off-diagonal relation once (M is symmetric).
    xy += xv[i] * yv[i];
    xx += xv[i] * xv[i];
    yy += yv[i] * yv[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double cross_xy = xv[i] * yv[j] + xv[j] * yv[i];
      const double cross_xx = 2.0 * xv[i] * xv[j];
      const double cross_yy = 2.0 * yv[i] * yv[j];
      if (cross_xy == 0.0 && cross_xx == 0.0 && cross_yy == 0.0) continue;
      const double m = relation(tokens[i], tokens[j]);
      if (m == 0.0) continue;
      xy += m * cross_xy;
      xx += m * cross_xx;
      yy += m * cross_yy;
    }
  }
  if (xx <= 0.0 || yy <= 0.0) return 0.0;
  return std::clamp(xy / std::sqrt(xx * yy), 0.0, 1.0);
}

}  // namespace

double soft_cosine_similarity(const TokenBag& a, const TokenBag& b, const WordRelationModel& model) {
  return soft_cosine_impl(a, b, [&](std::string_view s, std::string_view t) { return model.relation(s, t); });
}

double soft_cosine_similarity(const TokenBag& a, const TokenBag& b, const RelationFn& relation) {
  return soft_cosine_impl(a, b, [&](std::string_view s, std::string_view t) {
    return std::clamp(relation(s, t), 0.0, 1.0);
  });
}

// ---------------------------------------------------------------------------
// Providers

double CosineProvider::similarity(const TokenBag& a, const TokenBag& b) const {
  return cosine_similarity(a, b);
}

SoftCosineProvider::SoftCosineProvider(std::shared_ptr<const WordRelationModel> model)
    : model_(std::move(model)) {
  if (!model_) throw std::invalid_argument("SoftCosineProvider needs a model");
}

double SoftCosineProvider::similarity(const TokenBag& a, const TokenBag& b) const {
  return soft_cosine_similarity(a, b, *model_);
}

TextSimilarity::TextSimilarity() : provider_(std::make_shared<CosineProvider>()) {}

TextSimilarity::TextSimilarity(std::shared_ptr<const SimilarityProvider> provider, Tokenizer tokenizer,
                               std::optional<IdfTable> idf)
    : provider_(std::move(provider)), tokenizer_(std::move(tokenizer)), idf_(std::move(idf)) {
  if (!provider_) throw std::invalid_argument("TextSimilarity needs a provider");
}

TokenBag TextSimilarity::bag(std::string_view text) const {
  TokenBag bag = tokenizer_(text);
  return idf_ ? idf_->apply(bag) : bag;
}

double TextSimilarity::operator()(const TokenBag& a, const TokenBag& b) const {
  if (a.empty() || b.empty()) return 0.0;
  return provider_->similarity(a, b);
}

double TextSimilarity::texts(std::string_view a, std::string_view b) const {
  return (*this)(bag(a), bag(b));
}

}  // namespace ccdp
