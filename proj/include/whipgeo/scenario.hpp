#ifndef WHIPGEO_SCENARIO_HPP
#define WHIPGEO_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "whipgeo/metrics.hpp"

namespace whip {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigInvalid = 2;
inline constexpr int kExitNumerical = 3;

enum class ScenarioKind {
  Rod,
  PerturbedRod,
  Circle,
  CustomTheta,
  MMGeodesic,
  Zigzag,
  CurvatureSweep,
  ConjugateSweep,
  GreenAudit,
  FreeLengthTension,
};

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

struct ScenarioInfo {
  ScenarioKind kind;
  std::string_view name;
  std::vector<std::string_view> required;
  std::string_view summary;
};
const std::vector<ScenarioInfo>& scenario_catalog();

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Rod;
  std::string name;  // subdirectory inside a batch
  int n = 128;
  double dt = 1e-3;
  double T = 1.0;
  double omega = 1.0;
  std::vector<int> modes{2, 3, 4};
  MetricKind metric = MetricKind::L2;
  std::uint64_t seed = 1;
  std::optional<double> amplitude;
  std::vector<double> theta_coeffs;
  std::vector<double> frequencies{1, 2, 4, 8};
  int steps = 400;
  int curves = 0;    // 0 selects the per-kind default
  int sections = 0;  // 0 selects the per-kind default
  int project_each = 0;
  int store_every = 0;  // 0 stores about 200 frames
  int probe_modes = 6;
  bool quotient_translations = false;
  double ell = 1.0;
  std::string curve = "straight";
  nlohmann::json echo;
};

// Throws WhipError(ConfigInvalid) on unknown keys, wrong types, missing required fields or
// out-of-range values.
ScenarioConfig parse_config(const nlohmann::json& j);
// A single config object, or {"batch": [config, ...]} with distinct names.
std::vector<ScenarioConfig> load_config_file(const std::filesystem::path& path);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "=="
  bool pass = false;
};

struct ScenarioResult {
  int exit_code = kExitOk;
  nlohmann::json summary;
};

// Writes outputs and summary.json into out. Numerical failures and failed checks give exit 3.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out);
// Runs every config in its own subdirectory on at most threads workers; returns the worst exit code.
int run_batch(const std::vector<ScenarioConfig>& cfgs, const std::filesystem::path& out, int threads);
// WHIPGEO_THREADS if set to a positive integer, else the hardware concurrency.
int thread_cap_from_env();

struct GreenAuditResult {
  std::vector<Check> checks;
  nlohmann::json report;
  bool pass() const;
};
GreenAuditResult audit_green(int n, const std::string& curve, std::uint64_t seed = 1);

nlohmann::json checks_to_json(const std::vector<Check>& checks);

}  // namespace whip

#endif
