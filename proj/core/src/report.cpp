#include "ccdp/report.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace ccdp {
namespace {

using nlohmann::ordered_json;

std::string to_hex(const unsigned char* data, std::size_t size) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(kDigits[data[i] >> 4]);
    out.push_back(kDigits[data[i] & 0xF]);
  }
  return out;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      EVP_MD_CTX_free(ctx_);
      throw Error(ErrorCode::kIoFailure, "SHA-256 unavailable");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t size) { EVP_DigestUpdate(ctx_, data, size); }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx_, digest.data(), &length);
    return to_hex(digest.data(), length);
  }

 private:
  EVP_MD_CTX* ctx_;
};

ordered_json config_json(const ProximityConfig& cfg) {
  ordered_json j;
  j["a"] = cfg.a;
  j["b"] = cfg.b;
  j["c"] = cfg.c;
  j["k_hours"] = cfg.k_hours;
  j["threshold"] = cfg.threshold;
  ordered_json w;
  w["from_from"] = cfg.w.at(Role::kFrom, Role::kFrom);
  w["from_to"] = cfg.w.at(Role::kFrom, Role::kTo);
  w["from_cc"] = cfg.w.at(Role::kFrom, Role::kCc);
  w["to_to"] = cfg.w.at(Role::kTo, Role::kTo);
  w["to_cc"] = cfg.w.at(Role::kTo, Role::kCc);
  w["cc_cc"] = cfg.w.at(Role::kCc, Role::kCc);
  j["role_weights"] = w;
  return j;
}

ordered_json breakdown_fields(ordered_json j, const ProximityBreakdown& b) {
  j["ip"] = b.ip;
  j["tp"] = b.tp;
  j["ssp"] = b.ssp;
  j["asp"] = b.asp;
  j["csp"] = b.csp;
  j["sp"] = b.sp;
  j["gp"] = b.gp;
  return j;
}

// Attaches the manifest after the payload and records the payload digest.
std::string finish(ordered_json payload, const RunManifest* manifest) {
  if (manifest != nullptr) {
    const std::string digest = sha256_hex(payload.dump());
    ordered_json m;
    m["tool_version"] = manifest->tool_version;
    m["config"] = config_json(manifest->config);
    m["similarity"] = manifest->similarity;
    m["idf"] = manifest->idf;
    m["horizon_hours"] = manifest->horizon_hours ? ordered_json(*manifest->horizon_hours) : ordered_json(nullptr);
    m["inputs"] = ordered_json::array();
    for (const auto& in : manifest->inputs) {
      ordered_json entry;
      entry["name"] = in.name;
      entry["sha256"] = in.sha256;
      m["inputs"].push_back(entry);
    }
    m["payload_sha256"] = digest;
    if (manifest->generated_at) m["generated_at"] = *manifest->generated_at;
    payload["manifest"] = m;
  }
  return payload.dump(2) + "\n";
}

ordered_json dispersion_json(const std::optional<Dispersion>& d) {
  if (!d) return nullptr;
  ordered_json j;
  j["max"] = d->max;
  j["min"] = d->min;
  j["average"] = d->average;
  return j;
}

ordered_json stratum_json(const StratumReport& s) {
  ordered_json j;
  j["pairs"] = s.pairs;
  j["gs"] = dispersion_json(s.gs);
  j["cp"] = dispersion_json(s.cp);
  j["average_absolute_deviation"] =
      s.average_absolute_deviation ? ordered_json(*s.average_absolute_deviation) : ordered_json(nullptr);
  return j;
}

}  // namespace

std::string_view library_version() noexcept { return "1.0.0"; }

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buffer{};
  while (in.read(buffer.data(), buffer.size()) || in.gcount() > 0) {
    h.update(buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "failed reading " + path.string());
  return h.hex();
}

std::string threads_to_json(const std::vector<Ect>& ects) {
  ordered_json root = ordered_json::array();
  for (const auto& e : ects) {
    ordered_json j;
    j["ect_id"] = e.ect_id;
    j["message_ids"] = e.message_ids;
    root.push_back(j);
  }
  return root.dump(2) + "\n";
}

std::string ccdps_to_json(const std::vector<Ccdp>& ccdps, const RunManifest* manifest) {
  ordered_json root;
  root["ccdps"] = ordered_json::array();
  for (const auto& c : ccdps) {
    ordered_json j;
    j["ccdp_id"] = c.ccdp_id;
    j["ect_ids"] = c.ect_ids;
    j["links"] = ordered_json::array();
    for (const auto& link : c.links) {
      ordered_json l;
      l["msg_a"] = link.msg_a;
      l["msg_b"] = link.msg_b;
      j["links"].push_back(breakdown_fields(std::move(l), link.breakdown));
    }
    root["ccdps"].push_back(j);
  }
  return finish(std::move(root), manifest);
}

std::string eval_to_json(const EvalReport& report, const RunManifest* manifest) {
  ordered_json root;
  root["pairs"] = ordered_json::array();
  for (const auto& p : report.pairs) {
    ordered_json j;
    j["msg_a"] = p.pair.first;
    j["msg_b"] = p.pair.second;
    j["stratum"] = p.same_ect ? "same_ect" : "cross_ect";
    j["gs"] = p.gs;
    j["cp"] = p.cp;
    root["pairs"].push_back(breakdown_fields(std::move(j), p.breakdown));
  }
  ordered_json stats;
  stats["all"] = stratum_json(report.all);
  stats["same_ect"] = stratum_json(report.same_ect);
  stats["cross_ect"] = stratum_json(report.cross_ect);
  root["stats"] = stats;
  ordered_json scaled;
  scaled["compensatory_coefficient"] = report.compensatory_coefficient;
  scaled["gs"] = dispersion_json(report.scaled_gs);
  scaled["average_absolute_deviation"] = report.scaled_average_absolute_deviation;
  root["scaled"] = scaled;
  return finish(std::move(root), manifest);
}

std::string breakdown_to_json(std::string_view msg_a, std::string_view msg_b,
                              const ProximityBreakdown& breakdown) {
  ordered_json j;
  j["msg_a"] = std::string(msg_a);
  j["msg_b"] = std::string(msg_b);
  return breakdown_fields(std::move(j), breakdown).dump(2) + "\n";
}

}  // namespace ccdp
