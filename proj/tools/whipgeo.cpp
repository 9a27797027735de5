#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "whipgeo/scenario.hpp"

namespace {

int cmd_list(bool as_json) {
  if (as_json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const whip::ScenarioInfo& s : whip::scenario_catalog()) {
      std::vector<std::string> req(s.required.begin(), s.required.end());
      arr.push_back({{"scenario", s.name}, {"required", req}, {"summary", s.summary}});
    }
    std::cout << arr.dump(2) << '\n';
    return whip::kExitOk;
  }
  std::printf("%-22s %-34s %s\n", "scenario", "required fields", "summary");
  for (const whip::ScenarioInfo& s : whip::scenario_catalog()) {
    std::string req;
    for (std::string_view r : s.required) req += (req.empty() ? "" : ",") + std::string(r);
    std::printf("%-22s %-34s %s\n", std::string(s.name).c_str(), req.c_str(), std::string(s.summary).c_str());
  }
  return whip::kExitOk;
}

int cmd_run(const std::string& config, const std::string& out) {
  std::vector<whip::ScenarioConfig> cfgs;
  try {
    cfgs = whip::load_config_file(config);
  } catch (const whip::WhipError& e) {
    std::cerr << "whipgeo: " << e.what() << '\n';
    return whip::kExitConfigInvalid;
  }
  const int code = whip::run_batch(cfgs, out, whip::thread_cap_from_env());
  if (code != whip::kExitOk) std::cerr << "whipgeo: run finished with failures, see summary.json\n";
  return code;
}

int cmd_audit_green(int n, const std::string& curve, std::uint64_t seed, bool as_json) {
  whip::GreenAuditResult r;
  try {
    r = whip::audit_green(n, curve, seed);
  } catch (const whip::WhipError& e) {
    std::cerr << "whipgeo: " << e.what() << '\n';
    const bool bad_input = e.kind() == whip::ErrorKind::OddNodeCount || e.kind() == whip::ErrorKind::GridTooSmall ||
                           e.kind() == whip::ErrorKind::InvalidArgument;
    return bad_input ? whip::kExitConfigInvalid : whip::kExitNumerical;
  }
  if (as_json) {
    std::cout << r.report.dump(2) << '\n';
  } else {
    std::printf("green audit: n=%d curve=%s rho=%.6g\n", n, curve.c_str(), r.report["rho"].get<double>());
    for (const whip::Check& c : r.checks)
      std::printf("  %-4s %-22s %.6e %s %.1e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.relation.c_str(),
                  c.threshold);
    std::printf("  literal bounds: upper %s (margin %.3e), lower %s (margin %.3e)\n",
                r.report["literal_upper_ok"].get<bool>() ? "hold" : "violated",
                r.report["literal_upper"]["margin"].get<double>(),
                r.report["literal_lower_ok"].get<bool>() ? "hold" : "violated",
                r.report["literal_lower"]["margin"].get<double>());
  }
  return r.pass() ? whip::kExitOk : whip::kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"whipgeo: inextensible whip geodesics and arc-space geometry"};
  app.require_subcommand(1);

  std::string config, out;
  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("--config", config, "JSON scenario file")->required();
  run->add_option("--out", out, "output directory")->required();

  bool list_json = false;
  auto* list = app.add_subcommand("list", "list scenario kinds");
  list->add_flag("--json", list_json, "machine-readable listing");

  int n = 128;
  std::string curve = "straight";
  std::uint64_t seed = 1;
  bool audit_json = false;
  auto* audit = app.add_subcommand("audit-green", "audit the Green matrix of a preset curve");
  audit->add_option("--n", n, "grid intervals (even)")->required();
  audit->add_option("--curve", curve, "straight | spiral | perturbed | random")
      ->check(CLI::IsMember({"straight", "spiral", "perturbed", "random"}));
  audit->add_option("--seed", seed, "seed for the random preset");
  audit->add_flag("--json", audit_json, "print the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return whip::kExitConfigInvalid;
  }

  if (*run) return cmd_run(config, out);
  if (*list) return cmd_list(list_json);
  return cmd_audit_green(n, curve, seed, audit_json);
}
