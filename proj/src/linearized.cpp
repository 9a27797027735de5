#include "whipgeo/linearized.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "whipgeo/legendre.hpp"
#include "whipgeo/presets.hpp"

namespace whip {
namespace {

struct Pair {
  Points eta, v, xi, xi_t;
};

struct PairRate {
  Points d_eta, d_v, d_xi, d_xi_t;
  Scalars sigma, phi;
};

PairRate pair_rhs(const Pair& p, const Grid& g) {
  const Scalars q = squared_norms(diff2(p.eta, g));
  const Scalars f = chord_energy(p.v, p.v, g);
  Scalars minus_f(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) minus_f[i] = -f[i];
  PairRate r;
  r.sigma = solve_tension_bvp(q, minus_f, g);
  const Scalars dq = dots(diff2(p.eta, g), diff2(p.xi, g));
  const Scalars df = chord_energy(p.v, p.xi_t, g);
  Scalars rhs(f.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = 2.0 * dq[i] * r.sigma[i] - 2.0 * df[i];
  r.phi = solve_tension_bvp(q, rhs, g);
  r.d_eta = p.v;
  r.d_xi = p.xi_t;
  r.d_v = flux_divergence(r.sigma, p.eta, g);
  const Points a1 = flux_divergence(r.sigma, p.xi, g);
  const Points a2 = flux_divergence(r.phi, p.eta, g);
  r.d_xi_t.resize(a1.size());
  for (std::size_t i = 0; i < a1.size(); ++i) r.d_xi_t[i] = a1[i] + a2[i];
  return r;
}

Points combo(const Points& x, double a, const Points& y) {
  Points out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

Pair advance(const Pair& p, double a, const PairRate& r) {
  return {combo(p.eta, a, r.d_eta), combo(p.v, a, r.d_v), combo(p.xi, a, r.d_xi), combo(p.xi_t, a, r.d_xi_t)};
}

Points rk4_sum(const Points& x, double dt, const Points& k1, const Points& k2, const Points& k3,
               const Points& k4) {
  Points out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

Points odd(const Points& f, const Grid& g) {
  if (g.periodic()) return f;
  return enforce_odd(VectorField(g, f)).values;
}

}  // namespace

JacobiSolution solve_jacobi(const Curve& gamma, const VectorField& w, const VectorField& y,
                            const JacobiOptions& opts) {
  require_same_grid(gamma.grid, w.grid);
  require_same_grid(gamma.grid, y.grid);
  const Grid& g = gamma.grid;
  if (!(opts.T > 0.0) || !(opts.dt > 0.0)) fail(ErrorKind::InvalidArgument, "T and dt must be positive");
  const std::size_t steps = static_cast<std::size_t>(std::max(1.0, std::ceil(opts.T / opts.dt - 1e-9)));
  const double dt = opts.T / static_cast<double>(steps);
  const int store_every = std::max(1, opts.store_every);

  Pair p{gamma.values, w.values, Points(g.size(), Vec2::Zero()), y.values};
  JacobiSolution sol;
  auto store = [&](const Pair& s, const Scalars& phi, double t) {
    sol.base.push_back(WhipState{Curve(g, s.eta, gamma.symmetry), VectorField(g, s.v, w.symmetry), t});
    sol.states.push_back(JacobiState{VectorField(g, s.xi, y.symmetry), VectorField(g, s.xi_t, y.symmetry), phi, t});
  };
  PairRate k1 = pair_rhs(p, g);
  store(p, k1.phi, 0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const TensionField tf{g, k1.sigma, std::nullopt};
    const double limit = max_stable_dt(tf, opts.cfl_factor);
    if (dt > limit) fail(ErrorKind::CflViolation, "Jacobi step exceeds CFL limit");
    const PairRate k2 = pair_rhs(advance(p, 0.5 * dt, k1), g);
    const PairRate k3 = pair_rhs(advance(p, 0.5 * dt, k2), g);
    const PairRate k4 = pair_rhs(advance(p, dt, k3), g);
    p.eta = odd(rk4_sum(p.eta, dt, k1.d_eta, k2.d_eta, k3.d_eta, k4.d_eta), g);
    p.v = odd(rk4_sum(p.v, dt, k1.d_v, k2.d_v, k3.d_v, k4.d_v), g);
    p.xi = odd(rk4_sum(p.xi, dt, k1.d_xi, k2.d_xi, k3.d_xi, k4.d_xi), g);
    p.xi_t = odd(rk4_sum(p.xi_t, dt, k1.d_xi_t, k2.d_xi_t, k3.d_xi_t, k4.d_xi_t), g);
    k1 = pair_rhs(p, g);
    if (k % static_cast<std::size_t>(store_every) == 0 || k == steps) store(p, k1.phi, dt * static_cast<double>(k));
  }
  return sol;
}

JacobiSolution solve_jacobi(const GeodesicTrajectory& traj, const VectorField& y) {
  if (traj.states.size() < 2) fail(ErrorKind::InvalidArgument, "trajectory needs at least two stored states");
  JacobiOptions opts;
  opts.dt = traj.states[1].time - traj.states[0].time;
  opts.T = traj.states.back().time - traj.states.front().time;
  const std::size_t expected = static_cast<std::size_t>(std::llround(opts.T / opts.dt)) + 1;
  if (expected != traj.states.size())
    fail(ErrorKind::InvalidArgument, "trajectory must be stored at every step");
  return solve_jacobi(traj.states.front().eta, traj.states.front().eta_t, y, opts);
}

double ModeRecord::amplitude(double t) const { return alpha == 0.0 ? t : std::sin(alpha * t) / alpha; }

ModeRecord mode_record(double omega, int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "mode index must be at least 1");
  return {n, std::abs(omega) * std::sqrt((2.0 * n + 1.0) * (n - 1.0))};
}

double rotating_rod_mode(double omega, int n, double t) { return mode_record(omega, n).amplitude(t); }

std::optional<double> conjugate_time(double omega, int n) {
  if (!(omega > 0.0)) fail(ErrorKind::InvalidArgument, "omega must be positive");
  const ModeRecord m = mode_record(omega, n);
  if (m.alpha == 0.0) return std::nullopt;
  return std::numbers::pi / m.alpha;
}

double critical_omega(int n) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "critical omega needs n >= 2");
  return std::numbers::pi / std::sqrt((2.0 * n + 1.0) * (n - 1.0));
}

VectorField mode_seed(const Curve& gamma, int n) {
  const AngularField theta = curve_to_theta(gamma, 0.0);
  return tangent_field(theta, legendre_deriv(2 * n - 1, gamma.grid));
}

double mode_amplitude(const Curve& eta, const VectorField& xi, int n) {
  const Grid& g = eta.grid;
  const Vec2 normal = perp(diff1(eta)[g.center()].normalized());
  const Scalars p = legendre(2 * n - 1, g);
  Scalars num(p.size()), den(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    num[i] = xi[i].dot(normal) * p[i];
    den[i] = p[i] * p[i];
  }
  return trapz(num, g) / trapz(den, g);
}

std::optional<double> first_zero(const std::vector<double>& t, const std::vector<double>& f) {
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    if (f[i] == 0.0 && t[i] > 0.0) return t[i];
    if (f[i] * f[i + 1] < 0.0) return t[i] + (t[i + 1] - t[i]) * f[i] / (f[i] - f[i + 1]);
  }
  return std::nullopt;
}

VectorField dexp_fd(const Curve& gamma, const VectorField& w, const VectorField& y, double eps, double dt) {
  if (!(eps >= 1e-6 && eps <= 1e-2)) fail(ErrorKind::InvalidArgument, "eps must lie in [1e-6, 1e-2]");
  VectorField wp = w, wm = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    wp.values[i] += eps * y.values[i];
    wm.values[i] -= eps * y.values[i];
  }
  const IntegrateOptions opts{0, 1000000, 0.5, 1e-2};
  const Curve ep = exp_map(gamma, wp, dt, opts);
  const Curve em = exp_map(gamma, wm, dt, opts);
  VectorField out(gamma.grid);
  out.symmetry = gamma.symmetry;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = (ep[i] - em[i]) / (2.0 * eps);
  return out;
}

SingularProbe min_singular_dexp(const Curve& gamma, const VectorField& w, int modes, double dt) {
  if (modes < 1 || modes > kMaxProbeModes) fail(ErrorKind::InvalidArgument, "mode count must lie in [1,12]");
  const Grid& g = gamma.grid;
  const std::size_t m = g.size();
  const Scalars weights = g.weights();
  Scalars wt(m);
  for (std::size_t i = 0; i < m; ++i) wt[i] = weights[i] * (1.0 - g.node(i) * g.node(i));

  // Normal profile <D field, N> in the frame of a curve; N = perp of the unit tangent.
  auto profile = [&](const Curve& base, const VectorField& field) {
    Points tan = diff1(base);
    const Points df = diff1(field.values, g);
    Eigen::VectorXd out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = df[i].dot(perp(tan[i].normalized()));
    return out;
  };

  std::vector<VectorField> seeds;
  Eigen::MatrixXd basis(m, modes);
  for (int k = 0; k < modes; ++k) {
    seeds.push_back(mode_seed(gamma, k + 1));
    basis.col(k) = profile(gamma, seeds.back());
  }
  const Eigen::VectorXd sw = Eigen::Map<const Eigen::VectorXd>(wt.data(), m).cwiseSqrt();
  const Eigen::MatrixXd wb = sw.asDiagonal() * basis;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(wb);

  JacobiOptions opts;
  opts.dt = dt;
  opts.store_every = 1000000;
  SingularProbe probe;
  probe.matrix.resize(modes, modes);
  for (int j = 0; j < modes; ++j) {
    const JacobiSolution sol = solve_jacobi(gamma, w, seeds[j], opts);
    const Eigen::VectorXd chi = profile(sol.base.back().eta, sol.states.back().xi);
    probe.matrix.col(j) = qr.solve(Eigen::VectorXd(sw.asDiagonal() * chi));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(probe.matrix);
  probe.singular_values = svd.singularValues();
  probe.min_singular = probe.singular_values.minCoeff();
  return probe;
}

}  // namespace whip
