#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ccdp/corpus.hpp"
#include "ccdp/semantic.hpp"
#include "ccdp/timestamp.hpp"

namespace ccdp {

/// Symmetric 4x4 role-pair coefficients. Absent/Absent is undefined: an
/// interlocutor missing from both messages is never enumerated.
class RoleWeightMatrix {
 public:
  /// From/From=1, From/To=1, From/Cc=0.25, To/To=1, To/Cc=0.5, Cc/Cc=1,
  /// every pair involving Absent = 0.
  RoleWeightMatrix();

  /// Throws std::out_of_range for Absent/Absent.
  double at(Role a, Role b) const;

  /// Sets both (a,b) and (b,a). Throws Error(kInvalidConfig) for values
  /// outside [0,1] or for Absent/Absent.
  void set(Role a, Role b, double value);

  friend bool operator==(const RoleWeightMatrix&, const RoleWeightMatrix&) = default;

 private:
  std::array<std::array<double, 4>, 4> w_{};
};

struct ProximityConfig {
  double a = 1.0 / 3.0;  // interlocutors
  double b = 1.0 / 3.0;  // time
  double c = 1.0 / 3.0;  // semantic
  double k_hours = 360.0;
  RoleWeightMatrix w;
  double threshold = 0.5;

  /// Throws Error(kInvalidConfig) on negative weights, a+b+c == 0, k <= 0 or
  /// a threshold outside [0,1].
  void validate() const;
};

/// Reads "key = value" lines ('#' starts a comment) on top of `base`.
/// Keys: a, b, c, k_hours, threshold, and the role weights
/// w_from_from, w_from_to, w_from_cc, w_to_to, w_to_cc, w_cc_cc
/// (w_to_from, w_cc_from, w_cc_to are accepted as aliases but must agree with
/// their mirror). Unknown keys are collected in `extra` when non-null,
/// otherwise rejected.
ProximityConfig parse_proximity_config(std::istream& in, ProximityConfig base = {},
                                       std::map<std::string, std::string>* extra = nullptr);
ProximityConfig load_proximity_config(const std::filesystem::path& path, ProximityConfig base = {},
                                      std::map<std::string, std::string>* extra = nullptr);

struct ProximityBreakdown {
  double ip = 0.0;
  double tp = 0.0;
  double ssp = 0.0;
  double asp = 0.0;
  double csp = 0.0;
  double sp = 0.0;
  double gp = 0.0;

  friend bool operator==(const ProximityBreakdown&, const ProximityBreakdown&) = default;
};

/// Sum of role-pair weights over the union of both messages' interlocutors,
/// divided by the size of that union.
double interlocutors_proximity(const Message& mi, const Message& mj, const RoleWeightMatrix& w);

/// exp(-|t2 - t1| / k) with the difference in hours.
double time_proximity(Timestamp t1, Timestamp t2, double k_hours);

/// Precomputed token bags of one message.
struct MessageText {
  TokenBag subject;      // normalized subject
  TokenBag attachments;  // attachment names joined with spaces
};

MessageText extract_text(const Message& message, const TextSimilarity& sim);

struct SemanticProximity {
  double ssp = 0.0;
  double asp = 0.0;
  double csp = 0.0;
  double sp = 0.0;
};

double subject_semantic_proximity(const MessageText& mi, const MessageText& mj, const TextSimilarity& sim);
double attachment_semantic_proximity(const MessageText& mi, const MessageText& mj, const TextSimilarity& sim);
double cross_semantic_proximity(const MessageText& mi, const MessageText& mj, const TextSimilarity& sim);
SemanticProximity semantic_proximity(const MessageText& mi, const MessageText& mj, const TextSimilarity& sim);

double subject_semantic_proximity(const Message& mi, const Message& mj, const TextSimilarity& sim);
double attachment_semantic_proximity(const Message& mi, const Message& mj, const TextSimilarity& sim);
double cross_semantic_proximity(const Message& mi, const Message& mj, const TextSimilarity& sim);
SemanticProximity semantic_proximity(const Message& mi, const Message& mj, const TextSimilarity& sim);

/// (a*ip + b*tp + c*sp) / (a + b + c).
double combine_global(double ip, double tp, double sp, const ProximityConfig& cfg) noexcept;

ProximityBreakdown global_proximity(const Message& mi, const Message& mj, const ProximityConfig& cfg,
                                    const TextSimilarity& sim);
ProximityBreakdown global_proximity(const Message& mi, const MessageText& ti, const Message& mj,
                                    const MessageText& tj, const ProximityConfig& cfg,
                                    const TextSimilarity& sim);

}  // namespace ccdp
