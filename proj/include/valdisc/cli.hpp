#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "valdisc/field.hpp"

namespace valdisc::cli {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Config rejected on load; the runner exits with code 2.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

struct Overrides {
  std::string scenario;
  std::string precision;
  std::optional<std::uint64_t> seed;
};

/// Validates a raw config and fills every default, so the result fully
/// determines the run. Throws SchemaError.
json normalize_config(const json& raw, const Overrides& o = {});
/// Default config of a scenario, before normalization.
json default_config(const std::string& scenario);

/// "sha256:<hex>" of the compact dump of a normalized config.
std::string config_hash(const json& cfg);

/// Nodes registered while running a scenario, by id.
using Registry = std::map<std::string, FieldPtr>;

/// Runs a normalized config. InvalidInput and PrecisionExhausted propagate;
/// a ConsistencyError means an internal check failed.
json run_scenario(const json& cfg, Registry* nodes = nullptr);

/// Serialized report: sorted keys, two-space indent, trailing newline.
std::string dump_report(const json& report);

struct VerifyResult {
  bool ok = false;
  std::string field;  // JSON pointer of the first divergence
  std::string message;
};

/// Recomputes the config hash, re-runs the embedded config and compares
/// every field, then re-evaluates each embedded witness check.
VerifyResult verify_report(const json& report);

}  // namespace valdisc::cli
