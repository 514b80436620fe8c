#include "ccdp/proximity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "ccdp/ect.hpp"

namespace ccdp {
namespace {

std::size_t idx(Role r) { return static_cast<std::size_t>(r); }

}  // namespace

RoleWeightMatrix::RoleWeightMatrix() {
  set(Role::kFrom, Role::kFrom, 1.0);
  set(Role::kFrom, Role::kTo, 1.0);
  set(Role::kFrom, Role::kCc, 0.25);
  set(Role::kTo, Role::kTo, 1.0);
  set(Role::kTo, Role::kCc, 0.5);
  set(Role::kCc, Role::kCc, 1.0);
  set(Role::kFrom, Role::kAbsent, 0.0);
  set(Role::kTo, Role::kAbsent, 0.0);
  set(Role::kCc, Role::kAbsent, 0.0);
}

double RoleWeightMatrix::at(Role a, Role b) const {
  if (a == Role::kAbsent && b == Role::kAbsent) {
    throw std::out_of_range("Absent/Absent has no interlocutor weight");
  }
  return w_[idx(a)][idx(b)];
}

void RoleWeightMatrix::set(Role a, Role b, double value) {
  if (a == Role::kAbsent && b == Role::kAbsent) {
    throw Error(ErrorCode::kInvalidConfig, "Absent/Absent has no interlocutor weight");
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "role weight " + std::string(to_string(a)) + "/" +
                                               std::string(to_string(b)) + " must lie in [0,1]");
  }
  w_[idx(a)][idx(b)] = value;
  w_[idx(b)][idx(a)] = value;
}

void ProximityConfig::validate() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(a) || !finite(b) || !finite(c) || a < 0.0 || b < 0.0 || c < 0.0) {
    throw Error(ErrorCode::kInvalidConfig, "weights a, b, c must be finite and non-negative");
  }
  if (a + b + c <= 0.0) throw Error(ErrorCode::kInvalidConfig, "a + b + c must be positive");
  if (!finite(k_hours) || k_hours <= 0.0) throw Error(ErrorCode::kInvalidConfig, "k_hours must be positive");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "threshold must lie in [0,1]");
  }
}

ProximityConfig parse_proximity_config(std::istream& in, ProximityConfig base,
                                       std::map<std::string, std::string>* extra) {
  struct RolePair {
    Role a;
    Role b;
  };
  static const std::map<std::string, RolePair, std::less<>> kRoleKeys = {
      {"w_from_from", {Role::kFrom, Role::kFrom}}, {"w_from_to", {Role::kFrom, Role::kTo}},
      {"w_from_cc", {Role::kFrom, Role::kCc}},     {"w_to_to", {Role::kTo, Role::kTo}},
      {"w_to_cc", {Role::kTo, Role::kCc}},         {"w_cc_cc", {Role::kCc, Role::kCc}},
      {"w_to_from", {Role::kTo, Role::kFrom}},     {"w_cc_from", {Role::kCc, Role::kFrom}},
      {"w_cc_to", {Role::kCc, Role::kTo}},
  };

  std::string line;
  std::size_t line_no = 0;
  std::map<std::pair<Role, Role>, std::pair<double, std::string>> role_values;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    const auto number = [&]() {
      char* end = nullptr;
      const double v = std::strtod(value.c_str(), &end);
      if (value.empty() || end != value.c_str() + value.size()) {
        throw Error(ErrorCode::kInvalidConfig,
                    "line " + std::to_string(line_no) + ": " + key + " is not a number");
      }
      return v;
    };
    if (key == "a") {
      base.a = number();
    } else if (key == "b") {
      base.b = number();
    } else if (key == "c") {
      base.c = number();
    } else if (key == "k_hours" || key == "k") {
      base.k_hours = number();
    } else if (key == "threshold") {
      base.threshold = number();
    } else if (const auto rk = kRoleKeys.find(key); rk != kRoleKeys.end()) {
      const Role lo = std::min(rk->second.a, rk->second.b);
      const Role hi = std::max(rk->second.a, rk->second.b);
      const double v = number();
      auto [it, inserted] = role_values.try_emplace({lo, hi}, v, key);
      if (!inserted && it->second.first != v) {
        throw Error(ErrorCode::kInvalidConfig, "asymmetric role weights: " + it->second.second +
                                                   " and " + key + " differ");
      }
    } else if (extra != nullptr) {
      (*extra)[key] = value;
    } else {
      throw Error(ErrorCode::kInvalidConfig, "line " + std::to_string(line_no) + ": unknown key " + key);
    }
  }
  for (const auto& [roles, value] : role_values) base.w.set(roles.first, roles.second, value.first);
  base.validate();
  return base;
}

ProximityConfig load_proximity_config(const std::filesystem::path& path, ProximityConfig base,
                                      std::map<std::string, std::string>* extra) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return parse_proximity_config(in, std::move(base), extra);
}

double interlocutors_proximity(const Message& mi, const Message& mj, const RoleWeightMatrix& w) {
  std::set<Interlocutor> people;
  for (const Message* m : {&mi, &mj}) {
    people.insert(m->from);
    people.insert(m->to.begin(), m->to.end());
    people.insert(m->cc.begin(), m->cc.end());
  }
  if (people.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : people) sum += w.at(role_of(mi, p), role_of(mj, p));
  return sum / static_cast<double>(people.size());
}

double time_proximity(Timestamp t1, Timestamp t2, double k_hours) {
  const double delta = std::abs(hours_between(t1, t2));
  return std::exp(-delta / k_hours);
}

MessageText extract_text(const Message& message, const TextSimilarity& sim) {
  MessageText text;
  text.subject = sim.bag(normalize_subject(message.subject));
  std::string joined;
  for (const auto& name : message.attachments) {
    if (!joined.empty()) joined.push_back(' ');
    joined += name;
  }
  text.attachments = sim.bag(joined);
  return text;
}

double subject_semantic_proximity(const MessageText& mi, const MessageText& mj, const TextSimilarity& sim) {
  return sim(mi.subject, mj.subject);
}

double attachment_semantic_proximity(const MessageText& mi, const MessageText& mj,
                                     const TextSimilarity& sim) {
  return sim(mi.attachments, mj.attachments);
}

double cross_semantic_proximity(const MessageText& mi, const MessageText& mj, const TextSimilarity& sim) {
  return std::max(sim(mi.subject, mj.attachments), sim(mj.subject, mi.attachments));
}

SemanticProximity semantic_proximity(const MessageText& mi, const MessageText& mj, const TextSimilarity& sim) {
  SemanticProximity s;
  s.ssp = subject_semantic_proximity(mi, mj, sim);
  s.asp = attachment_semantic_proximity(mi, mj, sim);
  s.csp = cross_semantic_proximity(mi, mj, sim);
  s.sp = std::max({s.ssp, s.asp, s.csp});
  return s;
}

double subject_semantic_proximity(const Message& mi, const Message& mj, const TextSimilarity& sim) {
  return subject_semantic_proximity(extract_text(mi, sim), extract_text(mj, sim), sim);
}

double attachment_semantic_proximity(const Message& mi, const Message& mj, const TextSimilarity& sim) {
  return attachment_semantic_proximity(extract_text(mi, sim), extract_text(mj, sim), sim);
}

double cross_semantic_proximity(const Message& mi, const Message& mj, const TextSimilarity& sim) {
  return cross_semantic_proximity(extract_text(mi, sim), extract_text(mj, sim), sim);
}

SemanticProximity semantic_proximity(const Message& mi, const Message& mj, const TextSimilarity& sim) {
  return semantic_proximity(extract_text(mi, sim), extract_text(mj, sim), sim);
}

double combine_global(double ip, double tp, double sp, const ProximityConfig& cfg) noexcept {
  return (cfg.a * ip + cfg.b * tp + cfg.c * sp) / (cfg.a + cfg.b + cfg.c);
}

ProximityBreakdown global_proximity(const Message& mi, const MessageText& ti, const Message& mj,
                                    const MessageText& tj, const ProximityConfig& cfg,
                                    const TextSimilarity& sim) {
  ProximityBreakdown out;
  out.ip = interlocutors_proximity(mi, mj, cfg.w);
  out.tp = time_proximity(mi.sent_at, mj.sent_at, cfg.k_hours);
  const SemanticProximity s = semantic_proximity(ti, tj, sim);
  out.ssp = s.ssp;
  out.asp = s.asp;
  out.csp = s.csp;
  out.sp = s.sp;
  out.gp = combine_global(out.ip, out.tp, out.sp, cfg);
  return out;
}

ProximityBreakdown global_proximity(const Message& mi, const Message& mj, const ProximityConfig& cfg,
                                    const TextSimilarity& sim) {
  return global_proximity(mi, extract_text(mi, sim), mj, extract_text(mj, sim), cfg, sim);
}

}  // namespace ccdp
