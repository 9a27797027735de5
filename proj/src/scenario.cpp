#include "whipgeo/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <thread>

#include "whipgeo/geometry.hpp"
#include "whipgeo/io.hpp"
#include "whipgeo/linearized.hpp"
#include "whipgeo/presets.hpp"

namespace whip {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct KindName {
  ScenarioKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ScenarioKind::Rod, "rod"},
    {ScenarioKind::PerturbedRod, "perturbed_rod"},
    {ScenarioKind::Circle, "circle"},
    {ScenarioKind::CustomTheta, "custom_theta"},
    {ScenarioKind::MMGeodesic, "mm_geodesic"},
    {ScenarioKind::Zigzag, "zigzag"},
    {ScenarioKind::CurvatureSweep, "curvature_sweep"},
    {ScenarioKind::ConjugateSweep, "conjugate_sweep"},
    {ScenarioKind::GreenAudit, "green_audit"},
    {ScenarioKind::FreeLengthTension, "free_length_tension"},
};

const std::set<std::string> kCurvePresets = {"straight", "spiral", "perturbed", "random"};

const std::set<std::string> kKnownKeys = {
    "scenario", "name",     "n",        "dt",           "T",           "omega",       "modes",
    "metric",   "seed",     "amplitude", "theta_coeffs", "frequencies", "steps",       "curves",
    "sections", "project_each", "store_every", "probe_modes", "quotient_translations", "ell", "curve"};

[[noreturn]] void invalid(const std::string& what) { fail(ErrorKind::ConfigInvalid, what); }

double get_real(const json& j, const char* key, double lo, double hi) {
  const json& v = j.at(key);
  if (!v.is_number()) invalid(std::string(key) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x) || x < lo || x > hi)
    invalid(std::string(key) + " = " + format_real(x) + " outside [" + format_real(lo) + ", " + format_real(hi) + "]");
  return x;
}

long long get_int(const json& j, const char* key, long long lo, long long hi) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) invalid(std::string(key) + " must be an integer");
  const long long x = v.get<long long>();
  if (x < lo || x > hi)
    invalid(std::string(key) + " = " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

std::vector<double> get_real_list(const json& j, const char* key, double lo, double hi, std::size_t max_len) {
  const json& v = j.at(key);
  if (!v.is_array() || v.empty() || v.size() > max_len)
    invalid(std::string(key) + " must be a non-empty array of at most " + std::to_string(max_len) + " numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) invalid(std::string(key) + " entries must be numbers");
    const double x = e.get<double>();
    if (!std::isfinite(x) || x < lo || x > hi) invalid(std::string(key) + " entry outside its range");
    out.push_back(x);
  }
  return out;
}

// Fallback when a kind-specific default applies.
double amplitude_or(const ScenarioConfig& c, double fallback) { return c.amplitude.value_or(fallback); }

Check check_le(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, "<=", value <= threshold};
}
Check check_ge(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, ">=", value >= threshold};
}
Check check_true(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, "==", ok}; }

struct Context {
  const ScenarioConfig& cfg;
  fs::path out;
  std::vector<Check> checks;
  json extra = json::object();
  std::vector<std::string> files;
  std::optional<std::string> failure_kind;
  std::string failure_message;

  Context(const ScenarioConfig& c, fs::path dir) : cfg(c), out(std::move(dir)) {}

  fs::path file(const std::string& name) {
    files.push_back(name);
    return out / name;
  }
};

Grid fixed_grid(const ScenarioConfig& c) { return make_grid(c.n, BoundaryKind::FixedFreeOdd); }

int store_every(const ScenarioConfig& c, double T, double dt) {
  if (c.store_every > 0) return c.store_every;
  const int steps = std::max(1, static_cast<int>(std::ceil(T / dt)));
  return std::max(1, steps / 200);
}

void conservation_checks(Context& ctx, const DiagnosticsSummary& d) {
  ctx.checks.push_back(check_le("l2_speed_drift", d.l2_speed_drift, 1e-3));
  ctx.checks.push_back(check_le("arc_length_drift", d.max_arc_err, 1e-3));
  ctx.checks.push_back(check_le("oddness_residual", d.max_odd_err, 1e-10));
  ctx.checks.push_back(check_ge("min_sigma", d.min_sigma, -1e-8));
}

GeodesicTrajectory run_whip(Context& ctx, const Curve& gamma, const VectorField& w) {
  const ScenarioConfig& c = ctx.cfg;
  IntegrateOptions o;
  o.project_each = c.project_each;
  o.store_every = store_every(c, c.T, c.dt);
  GeodesicTrajectory traj = gamma.grid.periodic()
                                ? integrate_periodic(gamma, w, c.T, c.dt, c.quotient_translations, o)
                                : integrate_geodesic(gamma, w, c.T, c.dt, o);
  write_trajectory_csv(ctx.file("trajectory.csv"), traj);
  if (!traj.diagnostics.empty()) {
    const DiagnosticsSummary d = diagnostics(traj);
    write_diagnostics_csv(ctx.file("diagnostics.csv"), d);
    conservation_checks(ctx, d);
  }
  if (traj.failed) {
    ctx.failure_kind = std::string(to_string(*traj.failure));
    ctx.failure_message = traj.failure_message;
  }
  return traj;
}

void run_rod(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const Grid g = fixed_grid(c);
  const Curve rod = straight_rod(g).curve;
  const VectorField w = sample<FieldTag>(g, [&](double s) { return Vec2(0.0, c.omega * s); });
  const GeodesicTrajectory traj = run_whip(ctx, rod, w);
  if (traj.failed) return;
  const WhipState& last = traj.states.back();
  const double th = c.omega * last.time;
  const Curve exact = sample<CurveTag>(g, [&](double s) { return Vec2(s * std::cos(th), s * std::sin(th)); });
  const Scalars sigma_exact = sample_scalar(g, [&](double s) { return c.omega * c.omega * (1 - s * s) / 2; });
  ctx.checks.push_back(check_le("position_error", sup_diff(last.eta.values, exact.values), 1e-3));
  ctx.checks.push_back(check_le("tension_error", sup_diff(traj.tensions.back().sigma, sigma_exact), 1e-3));
  write_curve_csv(ctx.file("final_curve.csv"), last.eta);
}

void run_charted(Context& ctx, const ChartedCurve& start, const Scalars& beta) {
  VectorField w = tangent_field(start.theta, beta);
  for (Vec2& v : w.values) v *= ctx.cfg.omega;
  const GeodesicTrajectory traj = run_whip(ctx, start.curve, w);
  if (!traj.states.empty()) write_curve_csv(ctx.file("final_curve.csv"), traj.states.back().eta);
}

void run_perturbed_rod(Context& ctx) {
  const Grid g = fixed_grid(ctx.cfg);
  const Scalars beta = sample_scalar(g, [](double s) { return 1.0 + 0.5 * std::cos(std::numbers::pi * s); });
  run_charted(ctx, sine_perturbed_rod(g, amplitude_or(ctx.cfg, 0.4)), beta);
}

void run_custom_theta(Context& ctx) {
  const Grid g = fixed_grid(ctx.cfg);
  run_charted(ctx, curve_from_even_poly(g, ctx.cfg.theta_coeffs), Scalars(g.size(), 1.0));
}

Scalars periodic_profile(const Grid& g, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double ca[5], sa[5];
  for (int k = 2; k <= 4; ++k) {
    ca[k] = normal(rng) / k;
    sa[k] = normal(rng) / k;
  }
  return sample_scalar(g, [&](double s) {
    double acc = 0.0;
    for (int k = 2; k <= 4; ++k)
      acc += ca[k] * std::cos(2 * std::numbers::pi * k * s) + sa[k] * std::sin(2 * std::numbers::pi * k * s);
    return acc;
  });
}

void run_circle(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const Grid g = make_grid(c.n, BoundaryKind::Periodic);
  Rng rng(c.seed);
  const Curve circle = unit_circle(g);

  if (c.quotient_translations) {
    // The rotation field is vertical, so the quotient run starts from a horizontal field instead.
    // Larger amplitudes steepen the circle within T = 1 and exhaust the arc-length budget.
    const VectorField w = circle_mode_field(g, 2, amplitude_or(c, 0.02));
    const GeodesicTrajectory traj = run_whip(ctx, circle, w);
    if (!traj.diagnostics.empty())
      ctx.checks.push_back(check_le("max_horizontality", diagnostics(traj).max_horizontality, 1e-4));
  } else {
    const VectorField w = sample<FieldTag>(g, [&](double s) -> Vec2 {
      const double a = 2 * std::numbers::pi * s;
      return Vec2(-c.omega * std::sin(a), c.omega * std::cos(a)) / (2 * std::numbers::pi);
    });
    const GeodesicTrajectory traj = run_whip(ctx, circle, w);
    if (!traj.failed) {
      const double th = c.omega * traj.states.back().time;
      Eigen::Matrix2d R; R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      Points exact(circle.size());
      for (std::size_t i = 0; i < exact.size(); ++i) exact[i] = R * circle[i];
      ctx.checks.push_back(check_le("position_error", sup_diff(traj.states.back().eta.values, exact), 1e-3));
    }
  }

  std::vector<std::vector<double>> phi_rows, section_rows;
  bool phi_ok = true, bound_ok = true;
  const int curves = c.curves > 0 ? c.curves : 10;
  const int sections = c.sections > 0 ? c.sections : 5;
  for (int k = 0; k < curves; ++k) {
    const Curve gamma = perturbed_circle(g, rng, 0.2);
    const PeriodicPhiReport phi = periodic_phi(periodic_curvature(gamma), g);
    phi_ok = phi_ok && phi.lower_ok && phi.upper_ok;
    phi_rows.push_back({double(k), phi.rho, phi.min_phi, phi.max_phi, phi.lower_bound, phi.upper_bound});
    const GreenMatrix G = green_matrix(gamma);
    for (int j = 0; j < sections; ++j) {
      const VectorField u = periodic_tangent_field(gamma, periodic_profile(g, rng));
      const VectorField v = periodic_tangent_field(gamma, periodic_profile(g, rng));
      const SectionReport r = sectional_curvature(G, gamma, u, v);
      bound_ok = bound_ok && r.K >= r.lower_bound - 1e-8;
      section_rows.push_back({double(k * sections + j), r.K, r.lower_bound, r.rho});
    }
  }
  write_table_csv(ctx.file("phi_bounds.csv"), {"curve_id", "rho", "min_phi", "max_phi", "lower_bound", "upper_bound"},
                  phi_rows);
  write_table_csv(ctx.file("curvature.csv"), {"section_id", "K", "lower_bound", "rho"}, section_rows);
  ctx.checks.push_back(check_true("phi_bounds", phi_ok));
  ctx.checks.push_back(check_true("periodic_curvature_bound", bound_ok));
}

Scalars mm_initial_a(const Grid& g, double amplitude) {
  // Vanishing to fourth order at s = +-1 keeps the pinned boundary consistent with a_t = b a_s.
  return sample_scalar(g, [&](double s) {
    const double q = 1 - s * s;
    return amplitude * s * q * q * q * q;
  });
}

void run_mm_geodesic(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const Grid g = fixed_grid(c);
  Rng rng(c.seed);
  const Curve gamma = curve_preset(c.curve, g, rng).curve;
  const MMTrajectory traj =
      mm_geodesic_integrate(gamma, mm_initial_a(g, amplitude_or(c, 0.5)), c.T, c.dt, store_every(c, c.T, c.dt));
  write_mm_trajectory_csv(ctx.file("trajectory.csv"), traj);
  MMResiduals worst;
  for (const MMResiduals& r : traj.residuals) {
    worst.b_s = std::max(worst.b_s, r.b_s);
    worst.a_s = std::max(worst.a_s, r.a_s);
    worst.kappa_t = std::max(worst.kappa_t, r.kappa_t);
    worst.transport = std::max(worst.transport, r.transport);
  }
  ctx.extra["residuals"] = {{"b_s", worst.b_s}, {"a_s", worst.a_s}, {"kappa_t", worst.kappa_t},
                            {"transport", worst.transport}};
  ctx.checks.push_back(check_le("compatibility_residual", worst.worst(), kMMResidualBudget));
  double edge = 0.0;
  for (const MMGeodesicState& s : traj.states) edge = std::max({edge, std::abs(s.a.front()), std::abs(s.a.back())});
  ctx.checks.push_back(check_le("boundary_a", edge, 0.0));
  if (traj.failed) {
    ctx.failure_kind = std::string(to_string(*traj.failure));
    ctx.failure_message = traj.failure_message;
  }
}

void run_zigzag(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const Grid g = fixed_grid(c);
  const AngularField t1(g, Scalars(g.size(), 0.0));
  const AngularField t2(g, Scalars(g.size(), std::numbers::pi / 2));
  ZigzagOptions o;
  o.steps = c.steps;
  o.amplitude = amplitude_or(c, 2.0);
  const std::vector<ZigzagRow> rows = zigzag_experiment(t1, t2, c.frequencies, o);
  std::vector<std::vector<double>> table;
  bool above = true, decreasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ZigzagRow& r = rows[i];
    const double extra = c.metric == MetricKind::L2              ? r.l2_length
                         : c.metric == MetricKind::MichorMumford ? r.mm_length
                                                                 : path_length(zigzag_path(t1, t2, r.freq, o), c.metric);
    table.push_back({r.freq, r.mm_length, r.l2_length, r.chord, extra});
    above = above && r.l2_length >= r.chord - 1e-3;
    if (i > 0 && rows[i - 1].freq < r.freq) decreasing = decreasing && r.mm_length < rows[i - 1].mm_length;
  }
  write_table_csv(ctx.file("zigzag.csv"),
                  {"freq", "mm_length", "l2_length", "chord", std::string("length_") + std::string(to_string(c.metric))},
                  table);
  ctx.checks.push_back(check_true("l2_above_chord", above));
  ctx.checks.push_back(check_true("mm_strictly_decreasing", decreasing));
}

void run_curvature_sweep(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const Grid g = fixed_grid(c);
  Rng rng(c.seed);
  const int curves = c.curves > 0 ? c.curves : 5;
  const int sections = c.sections > 0 ? c.sections : 10;
  std::vector<std::vector<double>> rows;
  double min_ratio_margin = INFINITY, min_K = INFINITY, min_M = INFINITY;
  for (int k = 0; k < curves; ++k) {
    const ChartedCurve cc = random_smooth_curve(g, rng, amplitude_or(c, 0.8));
    const GreenMatrix G = green_matrix(cc.curve);
    for (int j = 0; j < sections; ++j) {
      const VectorField u = tangent_field(cc.theta, random_even_profile(g, rng, 1.0));
      const VectorField v = tangent_field(cc.theta, random_even_profile(g, rng, 1.0));
      const SectionReport r = sectional_curvature(G, cc.curve, u, v);
      rows.push_back({double(k * sections + j), r.K, r.lower_bound, r.rho});
      min_K = std::min(min_K, r.K);
      min_ratio_margin = std::min(min_ratio_margin, r.K - r.lower_bound);
      min_M = std::min(min_M, min_section_integrand(u, v));
    }
  }
  write_table_csv(ctx.file("curvature.csv"), {"section_id", "K", "lower_bound", "rho"}, rows);
  const std::vector<ProbeRow> probe = curvature_unboundedness_probe(g, 6);
  std::vector<std::vector<double>> prow;
  bool increasing = true;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    prow.push_back({double(probe[i].n), probe[i].K});
    if (i > 0) increasing = increasing && probe[i].K > probe[i - 1].K;
  }
  write_table_csv(ctx.file("probe.csv"), {"n", "K"}, prow);
  ctx.checks.push_back(check_ge("min_K", min_K, 0.0));
  ctx.checks.push_back(check_ge("min_K_minus_bound", min_ratio_margin, -1e-8));
  ctx.checks.push_back(check_ge("min_integrand", min_M, -1e-12));
  ctx.checks.push_back(check_true("probe_increasing", increasing));
}

void run_conjugate_sweep(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const Grid g = fixed_grid(c);
  const Curve rod = straight_rod(g).curve;
  const VectorField w = sample<FieldTag>(g, [&](double s) { return Vec2(0.0, c.omega * s); });
  json report;
  report["omega"] = c.omega;
  report["modes"] = json::array();
  for (int mode : c.modes) {
    JacobiOptions o;
    o.T = c.T;
    o.dt = c.dt;
    const JacobiSolution sol = solve_jacobi(rod, w, mode_seed(rod, mode), o);
    const ModeRecord rec = mode_record(c.omega, mode);
    std::vector<double> ts, amp;
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < sol.states.size(); ++k) {
      const double t = sol.states[k].time;
      const double a = mode_amplitude(sol.base[k].eta, sol.states[k].xi, mode);
      ts.push_back(t);
      amp.push_back(a);
      rows.push_back({t, a, rec.amplitude(t)});
    }
    write_table_csv(ctx.file("mode_" + std::to_string(mode) + ".csv"), {"t", "amplitude", "exact"}, rows);
    const std::optional<double> measured = first_zero(ts, amp);
    const std::optional<double> predicted = conjugate_time(c.omega, mode);
    json m = {{"n", mode}, {"alpha", rec.alpha}};
    m["t_conj"] = measured ? json(*measured) : json(nullptr);
    m["t_conj_predicted"] = predicted ? json(*predicted) : json(nullptr);
    report["modes"].push_back(m);
    if (predicted && *predicted <= c.T) {
      const double rel = measured ? std::abs(*measured - *predicted) / *predicted : INFINITY;
      ctx.checks.push_back(check_le("mode_" + std::to_string(mode) + "_zero_rel_error", rel, 1e-2));
    }
  }
  if (c.probe_modes > 0) {
    const SingularProbe p = min_singular_dexp(rod, w, c.probe_modes, c.dt);
    report["min_singular"] = p.min_singular;
    if (c.omega == 0.0) ctx.checks.push_back(check_le("identity_min_singular", std::abs(p.min_singular - 1.0), 1e-3));
  } else {
    report["min_singular"] = nullptr;
  }
  write_json(ctx.file("conjugate.json"), report);
  ctx.extra["conjugate"] = report;
}

void run_green_audit(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const int curves = c.curve == "random" ? std::max(1, c.curves) : 1;
  Rng rng(c.seed);
  const Grid g = fixed_grid(c);
  json reports = json::array();
  for (int k = 0; k < curves; ++k) {
    const Rng::result_type sub = rng();
    const GreenAuditResult r = audit_green(c.n, c.curve, sub);
    for (Check ch : r.checks) {
      if (curves > 1) ch.name = "curve" + std::to_string(k) + "_" + ch.name;
      ctx.checks.push_back(ch);
    }
    reports.push_back(r.report);
    if (k == 0) {
      Rng again(sub);
      write_green_csv(ctx.file("green.csv"), green_matrix(curve_preset(c.curve, g, again).curve));
    }
  }
  write_json(ctx.file("green_report.json"), reports);
}

void run_free_length(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const Grid g = fixed_grid(c);
  Rng rng(c.seed);
  const ChartedCurve base = curve_preset(c.curve, g, rng);
  Curve eta = base.curve;
  for (Vec2& p : eta.values) p *= c.ell;
  VectorField w = tangent_field(base.theta, Scalars(g.size(), 1.0));
  for (Vec2& v : w.values) v *= c.ell * c.omega;
  const TensionField t = solve_tension_free_length(eta, w, c.ell);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < g.size(); ++i) rows.push_back({g.node(i), t.sigma[i]});
  write_table_csv(ctx.file("tension.csv"), {"s", "sigma"}, rows);
  const double C = t.constant_c.value_or(0.0);
  ctx.extra["C"] = C;
  ctx.checks.push_back(check_le("ode_residual", free_length_residual(t, eta, w, c.ell), 1e-8));
  ctx.checks.push_back(check_le("boundary_sigma", std::max(std::abs(t.sigma.front()), std::abs(t.sigma.back())), 0.0));
  ctx.checks.push_back(check_le("mean_sigma", std::abs(trapz(t.sigma, g)), 1e-10));
  if (c.curve == "straight") {
    ctx.checks.push_back(check_le("sigma_vanishes", sup_norm(t.sigma), 1e-8));
    ctx.checks.push_back(check_le("C_error", std::abs(C - c.ell * c.ell * c.omega * c.omega), 1e-6));
  }
}

void dispatch(Context& ctx) {
  switch (ctx.cfg.kind) {
    case ScenarioKind::Rod: return run_rod(ctx);
    case ScenarioKind::PerturbedRod: return run_perturbed_rod(ctx);
    case ScenarioKind::Circle: return run_circle(ctx);
    case ScenarioKind::CustomTheta: return run_custom_theta(ctx);
    case ScenarioKind::MMGeodesic: return run_mm_geodesic(ctx);
    case ScenarioKind::Zigzag: return run_zigzag(ctx);
    case ScenarioKind::CurvatureSweep: return run_curvature_sweep(ctx);
    case ScenarioKind::ConjugateSweep: return run_conjugate_sweep(ctx);
    case ScenarioKind::GreenAudit: return run_green_audit(ctx);
    case ScenarioKind::FreeLengthTension: return run_free_length(ctx);
  }
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  for (const KindName& k : kKindNames)
    if (k.kind == kind) return k.name;
  return "?";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  for (const KindName& k : kKindNames)
    if (k.name == name) return k.kind;
  return std::nullopt;
}

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog = {
      {ScenarioKind::Rod, "rod", {"n", "dt", "T", "omega"}, "rigidly rotating straight rod against its closed form"},
      {ScenarioKind::PerturbedRod, "perturbed_rod", {"n", "dt", "T"}, "sine-perturbed rod with a smooth tangent field"},
      {ScenarioKind::Circle, "circle", {"n", "dt", "T"}, "periodic sector: rotating circle, phi and curvature bounds"},
      {ScenarioKind::CustomTheta, "custom_theta", {"n", "dt", "T", "theta_coeffs"}, "curve from even angle polynomial"},
      {ScenarioKind::MMGeodesic, "mm_geodesic", {"n", "dt", "T"}, "Michor-Mumford geodesic in intrinsic variables"},
      {ScenarioKind::Zigzag, "zigzag", {"n", "frequencies"}, "zig-zag homotopies between (s,0) and (0,s)"},
      {ScenarioKind::CurvatureSweep, "curvature_sweep", {"n", "seed"}, "random sections and the unboundedness probe"},
      {ScenarioKind::ConjugateSweep, "conjugate_sweep", {"n", "dt", "T", "omega", "modes"},
       "Jacobi modes along the rotating rod"},
      {ScenarioKind::GreenAudit, "green_audit", {"n", "curve"}, "Green matrix symmetry, sign and bounds"},
      {ScenarioKind::FreeLengthTension, "free_length_tension", {"n", "omega", "ell"},
       "tension with a free length constant"},
  };
  return catalog;
}

ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) invalid("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kKnownKeys.count(key)) invalid("unknown key '" + key + "'");
  if (!j.contains("scenario") || !j.at("scenario").is_string()) invalid("missing string key 'scenario'");
  const auto kind = parse_scenario_kind(j.at("scenario").get<std::string>());
  if (!kind) invalid("unknown scenario '" + j.at("scenario").get<std::string>() + "'");

  ScenarioConfig c;
  c.kind = *kind;
  c.echo = j;
  for (const ScenarioInfo& info : scenario_catalog())
    if (info.kind == c.kind)
      for (std::string_view req : info.required)
        if (!j.contains(std::string(req))) invalid("scenario " + std::string(info.name) + " requires '" + std::string(req) + "'");

  if (j.contains("name")) {
    if (!j.at("name").is_string()) invalid("name must be a string");
    c.name = j.at("name").get<std::string>();
    if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos || c.name == "." || c.name == "..")
      invalid("name must be a plain directory name");
  }
  if (j.contains("n")) {
    c.n = static_cast<int>(get_int(j, "n", 8, 4096));
    if (c.n % 2) invalid("n must be even");
  }
  if (j.contains("dt")) c.dt = get_real(j, "dt", 1e-7, 0.5);
  if (j.contains("T")) c.T = get_real(j, "T", 0.0, 100.0);
  if (j.contains("omega")) c.omega = get_real(j, "omega", 0.0, 100.0);
  if (j.contains("modes")) {
    c.modes.clear();
    for (double m : get_real_list(j, "modes", 1, 8, 8)) {
      if (m != std::floor(m)) invalid("modes must be integers");
      c.modes.push_back(static_cast<int>(m));
    }
  }
  if (j.contains("metric")) {
    if (!j.at("metric").is_string()) invalid("metric must be a string");
    const auto m = parse_metric(j.at("metric").get<std::string>());
    if (!m) invalid("unknown metric '" + j.at("metric").get<std::string>() + "'");
    c.metric = *m;
  }
  if (j.contains("seed")) c.seed = static_cast<std::uint64_t>(get_int(j, "seed", 0, (1LL << 62)));
  if (j.contains("amplitude")) c.amplitude = get_real(j, "amplitude", 0.0, 10.0);
  if (j.contains("theta_coeffs")) c.theta_coeffs = get_real_list(j, "theta_coeffs", -100.0, 100.0, 8);
  if (j.contains("frequencies")) c.frequencies = get_real_list(j, "frequencies", 0.0, 64.0, 32);
  if (j.contains("steps")) c.steps = static_cast<int>(get_int(j, "steps", 1, 100000));
  if (j.contains("curves")) c.curves = static_cast<int>(get_int(j, "curves", 1, 200));
  if (j.contains("sections")) c.sections = static_cast<int>(get_int(j, "sections", 1, 1000));
  if (j.contains("project_each")) c.project_each = static_cast<int>(get_int(j, "project_each", 0, 1000000));
  if (j.contains("store_every")) c.store_every = static_cast<int>(get_int(j, "store_every", 1, 1000000));
  if (j.contains("probe_modes")) c.probe_modes = static_cast<int>(get_int(j, "probe_modes", 0, kMaxProbeModes));
  if (j.contains("quotient_translations")) {
    if (!j.at("quotient_translations").is_boolean()) invalid("quotient_translations must be a boolean");
    c.quotient_translations = j.at("quotient_translations").get<bool>();
  }
  if (j.contains("ell")) c.ell = get_real(j, "ell", 1e-3, 100.0);
  if (j.contains("curve")) {
    if (!j.at("curve").is_string() || !kCurvePresets.count(j.at("curve").get<std::string>()))
      invalid("curve must be one of straight, spiral, perturbed, random");
    c.curve = j.at("curve").get<std::string>();
  }
  if (c.quotient_translations && c.kind != ScenarioKind::Circle)
    invalid("quotient_translations applies to the circle scenario only");
  return c;
}

std::vector<ScenarioConfig> load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    invalid(std::string("malformed JSON: ") + e.what());
  }
  std::vector<ScenarioConfig> out;
  if (j.is_object() && j.contains("batch")) {
    if (j.size() != 1) invalid("a batch config holds only the 'batch' key");
    const json& b = j.at("batch");
    if (!b.is_array() || b.empty()) invalid("batch must be a non-empty array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < b.size(); ++i) {
      ScenarioConfig c = parse_config(b[i]);
      if (c.name.empty()) c.name = std::to_string(i) + "_" + std::string(to_string(c.kind));
      if (!names.insert(c.name).second) invalid("duplicate batch name '" + c.name + "'");
      out.push_back(std::move(c));
    }
  } else {
    out.push_back(parse_config(j));
  }
  return out;
}

json checks_to_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const Check& c : checks)
    arr.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"relation", c.relation},
                   {"pass", c.pass}});
  return arr;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(out);
  Context ctx{cfg, out};
  try {
    dispatch(ctx);
  } catch (const WhipError& e) {
    ctx.failure_kind = std::string(to_string(e.kind()));
    ctx.failure_message = e.what();
  } catch (const std::exception& e) {
    ctx.failure_kind = "InternalError";
    ctx.failure_message = e.what();
  }
  ScenarioResult r;
  const bool checks_ok = std::all_of(ctx.checks.begin(), ctx.checks.end(), [](const Check& c) { return c.pass; });
  r.exit_code = ctx.failure_kind || !checks_ok ? kExitNumerical : kExitOk;
  json& s = r.summary;
  s["scenario"] = std::string(to_string(cfg.kind));
  s["config"] = cfg.echo;
  s["status"] = r.exit_code == kExitOk ? "ok" : "failed";
  s["checks"] = checks_to_json(ctx.checks);
  s["error"] = ctx.failure_kind ? json{{"kind", *ctx.failure_kind}, {"message", ctx.failure_message}} : json(nullptr);
  s["outputs"] = ctx.files;
  if (!ctx.extra.empty()) s["results"] = ctx.extra;
  s["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(out / "summary.json", s);
  return r;
}

int thread_cap_from_env() {
  if (const char* env = std::getenv("WHIPGEO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_batch(const std::vector<ScenarioConfig>& cfgs, const fs::path& out, int threads) {
  if (cfgs.size() == 1 && cfgs.front().name.empty()) return run_scenario(cfgs.front(), out).exit_code;
  std::vector<int> codes(cfgs.size(), kExitOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cfgs.size();) {
      const fs::path dir = out / (cfgs[i].name.empty() ? std::to_string(i) : cfgs[i].name);
      codes[i] = run_scenario(cfgs[i], dir).exit_code;
    }
  };
  const int workers = std::clamp<int>(threads, 1, static_cast<int>(cfgs.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  json index = json::array();
  for (std::size_t i = 0; i < cfgs.size(); ++i) index.push_back({{"name", cfgs[i].name}, {"exit_code", codes[i]}});
  write_json(out / "batch_summary.json", index);
  return *std::max_element(codes.begin(), codes.end());
}

bool GreenAuditResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

GreenAuditResult audit_green(int n, const std::string& curve, std::uint64_t seed) {
  const Grid g = make_grid(n, BoundaryKind::FixedFreeOdd);
  Rng rng(seed);
  const Curve gamma = curve_preset(curve, g, rng).curve;
  const GreenMatrix G = green_matrix(gamma);
  const GreenBoundsReport b = green_bounds_check(G, gamma);
  GreenAuditResult r;
  r.checks.push_back(check_le("symmetry_residual", b.symmetry_residual, 1e-10));
  r.checks.push_back(check_ge("min_entry", b.min_entry, -1e-12));
  r.checks.push_back(check_ge("upper_bound_margin", b.upper.margin, -kBoundRoundoff));
  r.checks.push_back(check_ge("lower_bound_margin", b.lower.margin, -kBoundRoundoff));
  if (curve == "straight") {
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double s = g.node(i), x = g.node(j);
        const double exact = (1 - std::max(s, x)) * (1 + std::min(s, x)) / 2;
        err = std::max(err, std::abs(G.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - exact));
      }
    r.checks.push_back(check_le("closed_form_error", err, 1e-3));
  }
  auto loc = [](const BoundLocation& l) { return json{{"margin", l.margin}, {"s", l.s}, {"x", l.x}}; };
  r.report = {{"n", n},
              {"curve", curve},
              {"seed", seed},
              {"rho", b.rho},
              {"lower_factor", b.lower_factor},
              {"symmetry_residual", b.symmetry_residual},
              {"min_entry", b.min_entry},
              {"folded_upper", loc(b.upper)},
              {"folded_lower", loc(b.lower)},
              {"literal_upper", loc(b.literal_upper)},
              {"literal_lower", loc(b.literal_lower)},
              {"literal_upper_ok", b.literal_upper_ok},
              {"literal_lower_ok", b.literal_lower_ok},
              {"checks", checks_to_json(r.checks)}};
  return r;
}

}  // namespace whip
