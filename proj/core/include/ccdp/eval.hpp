#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccdp/corpus.hpp"
#include "ccdp/ect.hpp"
#include "ccdp/proximity.hpp"
#include "ccdp/semantic.hpp"

namespace ccdp {

/// Unordered message pair; `first` <= `second` lexicographically.
struct PairKey {
  PairKey(std::string_view a, std::string_view b);

  std::string first;
  std::string second;

  friend bool operator==(const PairKey&, const PairKey&) = default;
  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

using PairScores = std::map<PairKey, double>;

struct GoldStandard {
  std::map<PairKey, std::vector<double>> ratings;

  /// Arithmetic mean of each pair's ratings.
  PairScores aggregated() const;
};

/// CSV with header "msg_a,msg_b,rater,score". Throws Error(kSchemaViolation)
/// for structural problems and Error(kOutOfRangeScore) for scores outside
/// [0,1], both naming the 1-based row.
GoldStandard load_gold_standard(std::istream& in);
GoldStandard load_gold_standard_file(const std::filesystem::path& path);

struct Dispersion {
  double max = 0.0;
  double min = 0.0;
  double average = 0.0;
};

/// Throws Error(kEmptyInput).
Dispersion dispersion_stats(std::span<const double> values);

/// Mean |gs(p) - cp(p)|. Throws Error(kKeyMismatch) naming every pair present
/// in only one of the maps.
double average_absolute_deviation(const PairScores& gs, const PairScores& cp);

struct Strata {
  std::vector<PairKey> same_ect;
  std::vector<PairKey> cross_ect;
};

/// Throws Error(kUnknownMessage) when a pair member is in no ECT.
Strata stratify(std::span<const PairKey> pairs, const std::vector<Ect>& ects);

struct CompensatoryScaling {
  double coefficient = 1.0;
  std::vector<double> scaled_gs;
};

/// coefficient = mean(cp) / mean(gs), applied multiplicatively to gs.
/// Throws Error(kEmptyInput) or Error(kZeroGoldMean).
CompensatoryScaling compensatory_scale(std::span<const double> gs_values, std::span<const double> cp_values);

struct StratumReport {
  std::size_t pairs = 0;
  std::optional<Dispersion> gs;
  std::optional<Dispersion> cp;
  std::optional<double> average_absolute_deviation;
};

struct PairEvaluation {
  PairKey pair;
  bool same_ect = false;
  double gs = 0.0;
  double cp = 0.0;
  ProximityBreakdown breakdown;
};

struct EvalReport {
  std::vector<PairEvaluation> pairs;  // sorted by pair key
  StratumReport all;
  StratumReport same_ect;
  StratumReport cross_ect;
  double compensatory_coefficient = 1.0;
  Dispersion scaled_gs;
  double scaled_average_absolute_deviation = 0.0;
};

/// Computes the calculated proximity of every gold pair and the dispersion,
/// deviation and compensatory-scaling statistics. Throws
/// Error(kUnknownMessage) for gold pairs naming messages outside the corpus.
EvalReport evaluate(const Corpus& corpus, const std::vector<Ect>& ects, const GoldStandard& gold,
                    const ProximityConfig& cfg, const TextSimilarity& sim);

/// Plain-text tables: overall, same ECT, different ECTs, and after the
/// compensatory coefficient.
std::string render_eval_tables(const EvalReport& report);

}  // namespace ccdp
