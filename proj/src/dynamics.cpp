#include "whipgeo/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace whip {
namespace {

Points axpy(const Points& x, double a, const Points& y) {
  Points out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

WhipState symmetrize(WhipState s) {
  if (!s.eta.grid.periodic()) {
    s.eta = enforce_odd(s.eta);
    s.eta_t = enforce_odd(s.eta_t);
  }
  return s;
}

double max_sigma(const TensionField& t) { return *std::max_element(t.sigma.begin(), t.sigma.end()); }

std::size_t step_count(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) fail(ErrorKind::InvalidArgument, "T and dt must be positive");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(T / dt - 1e-9)));
}

GeodesicTrajectory run(WhipState state, double T, double dt, const IntegrateOptions& opts) {
  GeodesicTrajectory traj;
  const std::size_t steps = step_count(T, dt);
  const double h = T / static_cast<double>(steps);
  const int store_every = std::max(1, opts.store_every);
  auto store = [&](const WhipState& s) {
    const TensionField t = solve_tension(s.eta, s.eta_t);
    traj.diagnostics.push_back(measure(s, t));
    traj.states.push_back(s);
    traj.tensions.push_back(t);
  };
  store(state);
  for (std::size_t k = 1; k <= steps; ++k) {
    try {
      state = step_rk4(state, h, opts.cfl_factor);
      state.time = h * static_cast<double>(k);
      if (opts.project_each > 0 && k % static_cast<std::size_t>(opts.project_each) == 0)
        state = reproject(state);
    } catch (const WhipError& e) {
      traj.failed = true;
      traj.failure = e.kind();
      traj.failure_message = e.what();
      return traj;
    }
    const double arc = unit_speed_error(state.eta);
    const bool over_budget = !(arc <= opts.drift_budget);
    if (over_budget || k % store_every == 0 || k == steps) {
      try {
        store(state);
      } catch (const WhipError& e) {
        traj.failed = true;
        traj.failure = e.kind();
        traj.failure_message = e.what();
        return traj;
      }
    }
    if (over_budget) {
      traj.failed = true;
      traj.failure = ErrorKind::DriftBudgetExceeded;
      traj.failure_message = "arc-length error " + std::to_string(arc) + " exceeds budget";
      return traj;
    }
  }
  return traj;
}

void check_initial(const Curve& gamma, const VectorField& w) {
  const CompatibilityReport rep = check_compatibility(gamma, w);
  const double tol = compatibility_tolerance(gamma, w);
  if (!(rep.worst() <= tol))
    fail(ErrorKind::IncompatibleInitialData,
         "compatibility residual " + std::to_string(rep.worst()) + " exceeds " + std::to_string(tol));
}

}  // namespace

Acceleration rhs(const WhipState& state) {
  TensionField t = solve_tension(state.eta, state.eta_t);
  VectorField acc(state.eta.grid, flux_divergence(t.sigma, state.eta.values, state.eta.grid),
                  state.eta.symmetry);
  return {std::move(acc), std::move(t)};
}

double max_stable_dt(const TensionField& t, double cfl_factor) {
  return cfl_factor * t.grid.spacing() / std::sqrt(std::max(0.0, max_sigma(t)) + kCflEpsilon);
}

WhipState step_rk4(const WhipState& s, double dt, double cfl_factor) {
  const Grid& g = s.eta.grid;
  const Acceleration a1 = rhs(s);
  const double limit = max_stable_dt(a1.tension, cfl_factor);
  if (dt > limit)
    fail(ErrorKind::CflViolation, "dt " + std::to_string(dt) + " exceeds CFL limit " + std::to_string(limit));
  auto stage = [&](const Points& x, const Points& v) {
    return rhs(WhipState{Curve(g, x, s.eta.symmetry), VectorField(g, v, s.eta_t.symmetry), s.time}).acc.values;
  };
  const Points& x0 = s.eta.values;
  const Points& v0 = s.eta_t.values;
  const Points& k1v = a1.acc.values;
  const Points x2 = axpy(x0, 0.5 * dt, v0), v2 = axpy(v0, 0.5 * dt, k1v);
  const Points k2v = stage(x2, v2);
  const Points x3 = axpy(x0, 0.5 * dt, v2), v3 = axpy(v0, 0.5 * dt, k2v);
  const Points k3v = stage(x3, v3);
  const Points x4 = axpy(x0, dt, v3), v4 = axpy(v0, dt, k3v);
  const Points k4v = stage(x4, v4);
  WhipState out = s;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    out.eta.values[i] = x0[i] + dt / 6.0 * (v0[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
    out.eta_t.values[i] = v0[i] + dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
  }
  out.time = s.time + dt;
  return symmetrize(std::move(out));
}

WhipState reproject(const WhipState& s) {
  if (s.eta.grid.periodic()) return s;
  WhipState out = s;
  out.eta = renormalize_arclength(s.eta);
  out.eta_t = enforce_odd(orthogonal_project(out.eta, s.eta_t));
  return out;
}

GeodesicTrajectory integrate_geodesic(const Curve& gamma, const VectorField& w, double T, double dt,
                                      const IntegrateOptions& opts) {
  require_fixed_free(gamma.grid);
  require_same_grid(gamma.grid, w.grid);
  check_initial(gamma, w);
  return run(symmetrize(WhipState{gamma, w, 0.0}), T, dt, opts);
}

Curve exp_map(const Curve& gamma, const VectorField& w, double dt, const IntegrateOptions& opts) {
  const GeodesicTrajectory traj = integrate_geodesic(gamma, w, 1.0, dt, opts);
  if (traj.failed) fail(*traj.failure, traj.failure_message);
  return traj.states.back().eta;
}

double horizontality(const Curve& eta, const VectorField& eta_t) {
  return trapz(dots(eta_t.values, diff1(eta)), eta.grid);
}

VectorField horizontal_part(const Curve& gamma, const VectorField& w) {
  const Points d = diff1(gamma);
  const double c = horizontality(gamma, w) / trapz(squared_norms(d), gamma.grid);
  VectorField out = w;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] -= c * d[i];
  return out;
}

GeodesicTrajectory integrate_periodic(const Curve& gamma, const VectorField& w, double T, double dt,
                                      bool quotient_translations, const IntegrateOptions& opts) {
  require_periodic(gamma.grid);
  require_same_grid(gamma.grid, w.grid);
  check_initial(gamma, w);
  if (quotient_translations && !(std::abs(horizontality(gamma, w)) <= kHorizontalityPrecondition))
    fail(ErrorKind::IncompatibleInitialData, "initial velocity is not horizontal");
  IntegrateOptions o = opts;
  o.project_each = 0;
  return run(WhipState{gamma, w, 0.0}, T, dt, o);
}

StepDiagnostics measure(const WhipState& s, const TensionField& t) {
  StepDiagnostics d;
  d.t = s.time;
  d.l2_speed = std::sqrt(trapz(squared_norms(s.eta_t.values), s.eta.grid));
  d.arc_err = unit_speed_error(s.eta);
  d.odd_err = s.eta.grid.periodic() ? 0.0 : std::max(odd_residual(s.eta.values), odd_residual(s.eta_t.values));
  d.min_sigma = *std::min_element(t.sigma.begin(), t.sigma.end());
  d.horizontality = horizontality(s.eta, s.eta_t);
  return d;
}

DiagnosticsSummary diagnostics(const GeodesicTrajectory& traj) {
  if (traj.diagnostics.empty()) fail(ErrorKind::InvalidArgument, "empty trajectory");
  DiagnosticsSummary out;
  out.rows = traj.diagnostics;
  const double v0 = out.rows.front().l2_speed;
  out.min_sigma = out.rows.front().min_sigma;
  for (const auto& r : out.rows) {
    const double drift = v0 > 0.0 ? std::abs(r.l2_speed - v0) / v0 : std::abs(r.l2_speed);
    out.l2_speed_drift = std::max(out.l2_speed_drift, drift);
    out.max_arc_err = std::max(out.max_arc_err, r.arc_err);
    out.max_odd_err = std::max(out.max_odd_err, r.odd_err);
    out.min_sigma = std::min(out.min_sigma, r.min_sigma);
    out.max_horizontality = std::max(out.max_horizontality, std::abs(r.horizontality));
  }
  return out;
}

}  // namespace whip
