#include "ccdp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ccdp {

PairKey::PairKey(std::string_view a, std::string_view b)
    : first(a <= b ? a : b), second(a <= b ? b : a) {}

PairScores GoldStandard::aggregated() const {
  PairScores out;
  for (const auto& [pair, scores] : ratings) {
    if (scores.empty()) continue;
    out.emplace(pair, std::accumulate(scores.begin(), scores.end(), 0.0) /
                          static_cast<double>(scores.size()));
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        current.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(std::move(current));
  for (auto& f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

double mean(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace

GoldStandard load_gold_standard(std::istream& in) {
  GoldStandard gold;
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_csv_row(line);
    const std::string where = "row " + std::to_string(row);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"msg_a", "msg_b", "rater", "score"}) {
        throw Error(ErrorCode::kSchemaViolation, where + ": expected header msg_a,msg_b,rater,score");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) {
      throw Error(ErrorCode::kSchemaViolation, where + ": expected 4 fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorCode::kSchemaViolation, where + ": empty message id");
    }
    if (fields[0] == fields[1]) {
      throw Error(ErrorCode::kSchemaViolation, where + ": a message cannot be paired with itself");
    }
    char* end = nullptr;
    const double score = std::strtod(fields[3].c_str(), &end);
    if (fields[3].empty() || end != fields[3].c_str() + fields[3].size() || std::isnan(score)) {
      throw Error(ErrorCode::kSchemaViolation, where + ": score is not a number");
    }
    if (score < 0.0 || score > 1.0) {
      throw Error(ErrorCode::kOutOfRangeScore, where + ": score " + fields[3] + " outside [0,1]");
    }
    gold.ratings[PairKey(fields[0], fields[1])].push_back(score);
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "failed reading gold standard");
  if (!header_seen) throw Error(ErrorCode::kSchemaViolation, "row 1: missing header");
  return gold;
}

GoldStandard load_gold_standard_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return load_gold_standard(in);
}

Dispersion dispersion_stats(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "dispersion of an empty value list");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*hi, *lo, mean(values)};
}

double average_absolute_deviation(const PairScores& gs, const PairScores& cp) {
  std::vector<std::string> missing;
  for (const auto& [pair, v] : gs) {
    if (cp.count(pair) == 0) missing.push_back(pair.first + "/" + pair.second + " (no calculated score)");
  }
  for (const auto& [pair, v] : cp) {
    if (gs.count(pair) == 0) missing.push_back(pair.first + "/" + pair.second + " (no gold score)");
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::kKeyMismatch, list);
  }
  if (gs.empty()) throw Error(ErrorCode::kEmptyInput, "no pairs to compare");
  double sum = 0.0;
  for (const auto& [pair, v] : gs) sum += std::abs(v - cp.at(pair));
  return sum / static_cast<double>(gs.size());
}

Strata stratify(std::span<const PairKey> pairs, const std::vector<Ect>& ects) {
  const auto index = index_ects(ects);
  const auto ect_of = [&](const std::string& id) {
    const auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorCode::kUnknownMessage, "message " + id + " is in no ECT");
    return it->second;
  };
  Strata strata;
  for (const auto& pair : pairs) {
    if (ect_of(pair.first) == ect_of(pair.second)) {
      strata.same_ect.push_back(pair);
    } else {
      strata.cross_ect.push_back(pair);
    }
  }
  return strata;
}

CompensatoryScaling compensatory_scale(std::span<const double> gs_values, std::span<const double> cp_values) {
  if (gs_values.empty() || cp_values.empty()) {
    throw Error(ErrorCode::kEmptyInput, "compensatory scaling needs non-empty value lists");
  }
  const double gs_mean = mean(gs_values);
  if (gs_mean == 0.0) throw Error(ErrorCode::kZeroGoldMean, "gold standard mean is zero");
  CompensatoryScaling out;
  out.coefficient = mean(cp_values) / gs_mean;
  out.scaled_gs.reserve(gs_values.size());
  for (double v : gs_values) out.scaled_gs.push_back(out.coefficient * v);
  return out;
}

namespace {

StratumReport stratum(const std::vector<PairEvaluation>& pairs, int which) {
  // which: 0 all, 1 same ECT, 2 cross ECT
  std::vector<double> gs;
  std::vector<double> cp;
  PairScores gs_map;
  PairScores cp_map;
  for (const auto& p : pairs) {
    if (which == 1 && !p.same_ect) continue;
    if (which == 2 && p.same_ect) continue;
    gs.push_back(p.gs);
    cp.push_back(p.cp);
    gs_map.emplace(p.pair, p.gs);
    cp_map.emplace(p.pair, p.cp);
  }
  StratumReport report;
  report.pairs = gs.size();
  if (!gs.empty()) {
    report.gs = dispersion_stats(gs);
    report.cp = dispersion_stats(cp);
    report.average_absolute_deviation = average_absolute_deviation(gs_map, cp_map);
  }
  return report;
}

}  // namespace

EvalReport evaluate(const Corpus& corpus, const std::vector<Ect>& ects, const GoldStandard& gold,
                    const ProximityConfig& cfg, const TextSimilarity& sim) {
  cfg.validate();
  const PairScores gs = gold.aggregated();
  if (gs.empty()) throw Error(ErrorCode::kEmptyInput, "gold standard has no pairs");

  std::vector<PairKey> keys;
  for (const auto& [pair, v] : gs) keys.push_back(pair);
  const Strata strata = stratify(keys, ects);
  const auto same = [&](const PairKey& k) {
    return std::find(strata.same_ect.begin(), strata.same_ect.end(), k) != strata.same_ect.end();
  };

  EvalReport report;
  for (const auto& [pair, score] : gs) {
    const Message& a = corpus.at(pair.first);
    const Message& b = corpus.at(pair.second);
    PairEvaluation eval{pair, same(pair), score, 0.0, global_proximity(a, b, cfg, sim)};
    eval.cp = eval.breakdown.gp;
    report.pairs.push_back(std::move(eval));
  }
  report.all = stratum(report.pairs, 0);
  report.same_ect = stratum(report.pairs, 1);
  report.cross_ect = stratum(report.pairs, 2);

  std::vector<double> gs_values;
  std::vector<double> cp_values;
  for (const auto& p : report.pairs) {
    gs_values.push_back(p.gs);
    cp_values.push_back(p.cp);
  }
  const CompensatoryScaling scaling = compensatory_scale(gs_values, cp_values);
  report.compensatory_coefficient = scaling.coefficient;
  report.scaled_gs = dispersion_stats(scaling.scaled_gs);
  PairScores scaled_map;
  PairScores cp_map;
  for (std::size_t i = 0; i < report.pairs.size(); ++i) {
    scaled_map.emplace(report.pairs[i].pair, scaling.scaled_gs[i]);
    cp_map.emplace(report.pairs[i].pair, report.pairs[i].cp);
  }
  report.scaled_average_absolute_deviation = average_absolute_deviation(scaled_map, cp_map);
  return report;
}

namespace {

std::string cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%8.3f", v);
  return buf;
}

void table(std::ostringstream& out, const std::string& title, const StratumReport& s) {
  out << title << " (" << s.pairs << (s.pairs == 1 ? " pair" : " pairs") << ")\n";
  char head[128];
  std::snprintf(head, sizeof head, "%-30s%8s  %8s\n", "", "GS", "CP");
  out << head;
  if (!s.gs) {
    out << "  (no pairs)\n\n";
    return;
  }
  out << "Max =                         " << cell(s.gs->max) << "  " << cell(s.cp->max) << "\n";
  out << "Min =                         " << cell(s.gs->min) << "  " << cell(s.cp->min) << "\n";
  out << "Average =                     " << cell(s.gs->average) << "  " << cell(s.cp->average) << "\n";
  out << "Average Absolute Deviation =  " << "     N/A" << "  " << cell(*s.average_absolute_deviation)
      << "\n\n";
}

}  // namespace

std::string render_eval_tables(const EvalReport& report) {
  std::ostringstream out;
  table(out, "Data dispersion between GS and CP", report.all);
  table(out, "Messages belonging to the same ECT", report.same_ect);
  table(out, "Messages belonging to different ECTs", report.cross_ect);

  char coefficient[64];
  std::snprintf(coefficient, sizeof coefficient, "%.3f", report.compensatory_coefficient);
  out << "After applying the compensatory coefficient " << coefficient << " to GS\n";
  out << "                                    GS        CP\n";
  out << "Max =                         " << cell(report.scaled_gs.max) << "  "
      << cell(report.all.cp ? report.all.cp->max : 0.0) << "\n";
  out << "Min =                         " << cell(report.scaled_gs.min) << "  "
      << cell(report.all.cp ? report.all.cp->min : 0.0) << "\n";
  out << "Average =                     " << cell(report.scaled_gs.average) << "  "
      << cell(report.all.cp ? report.all.cp->average : 0.0) << "\n";
  out << "Average Absolute Deviation =  " << cell(report.scaled_average_absolute_deviation)
      << "       N/A\n";
  return out.str();
}

}  // namespace ccdp
