#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccdp/ect.hpp"
#include "ccdp/eval.hpp"
#include "ccdp/linker.hpp"
#include "ccdp/proximity.hpp"

namespace ccdp {

std::string_view library_version() noexcept;

std::string sha256_hex(std::string_view data);
/// Throws Error(kIoFailure).
std::string sha256_file(const std::filesystem::path& path);

struct InputDigest {
  std::string name;
  std::string sha256;
};

// Embedded in every report. Only `generated_at` may differ between two runs
// over the same inputs; payload_sha256 covers everything but the manifest.
struct RunManifest {
  std::string tool_version{library_version()};
  ProximityConfig config;
  std::string similarity = "cosine";
  bool idf = false;
  std::optional<double> horizon_hours;
  std::vector<InputDigest> inputs;
  std::optional<std::string> generated_at;
};

/// [{"ect_id", "message_ids": [...]}]
std::string threads_to_json(const std::vector<Ect>& ects);

/// {"ccdps": [{"ccdp_id", "ect_ids", "links": [{"msg_a", "msg_b", "ip", "tp",
/// "ssp", "asp", "csp", "sp", "gp"}]}], "manifest": {...}}
std::string ccdps_to_json(const std::vector<Ccdp>& ccdps, const RunManifest* manifest = nullptr);

std::string eval_to_json(const EvalReport& report, const RunManifest* manifest = nullptr);

std::string breakdown_to_json(std::string_view msg_a, std::string_view msg_b,
                              const ProximityBreakdown& breakdown);

}  // namespace ccdp
