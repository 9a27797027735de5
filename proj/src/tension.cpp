#include "whipgeo/tension.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "whipgeo/charts.hpp"

namespace whip {
namespace {

// a_i x_{i-1} + b_i x_i + c_i x_{i+1} = r_i with a_0 = c_{m-1} = 0.
Scalars thomas(Scalars a, Scalars b, Scalars c, Scalars r) {
  const std::size_t m = b.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      r[i] -= w * r[i - 1];
    }
    if (!(std::abs(b[i]) > 1e-300) || !std::isfinite(b[i]))
      fail(ErrorKind::SolveFailure, "singular tridiagonal pivot at row " + std::to_string(i));
  }
  Scalars x(m);
  x[m - 1] = r[m - 1] / b[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) x[i] = (r[i] - c[i] * x[i + 1]) / b[i];
  for (double v : x)
    if (!std::isfinite(v)) fail(ErrorKind::SolveFailure, "non-finite tridiagonal solution");
  return x;
}

// Cyclic tridiagonal system with unit off-diagonals and corner entries, via Sherman-Morrison.
Scalars cyclic_unit(const Scalars& diag, const Scalars& r) {
  const std::size_t m = diag.size();
  const double gam = -diag[0];
  Scalars a(m, 1.0), c(m, 1.0), b = diag;
  a[0] = 0.0;
  c[m - 1] = 0.0;
  b[0] -= gam;
  b[m - 1] -= 1.0 / gam;
  const Scalars x = thomas(a, b, c, r);
  Scalars u(m, 0.0);
  u[0] = gam;
  u[m - 1] = 1.0;
  const Scalars z = thomas(a, b, c, u);
  const double denom = 1.0 + z[0] + z[m - 1] / gam;
  if (!(std::abs(denom) > 1e-14)) fail(ErrorKind::SolveFailure, "singular cyclic system");
  const double fact = (x[0] + x[m - 1] / gam) / denom;
  Scalars out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = x[i] - fact * z[i];
  for (double v : out)
    if (!std::isfinite(v)) fail(ErrorKind::SolveFailure, "non-finite cyclic solution");
  return out;
}

void check_sizes(const Scalars& q, const Scalars& rhs, const Grid& g) {
  if (q.size() != g.size() || rhs.size() != g.size())
    fail(ErrorKind::GridMismatch, "coefficient arrays do not match the grid");
}

}  // namespace

Scalars solve_tension_bvp(const Scalars& q, const Scalars& rhs, const Grid& g, double coeff) {
  check_sizes(q, rhs, g);
  const double h2 = g.spacing() * g.spacing();
  if (g.periodic()) {
    const std::size_t m = g.size();
    Scalars diag(m), r(m);
    for (std::size_t i = 0; i < m; ++i) {
      diag[i] = -(2.0 + h2 * q[i] / coeff);
      r[i] = h2 * rhs[i] / coeff;
    }
    return cyclic_unit(diag, r);
  }
  const std::size_t m = g.size() - 2;
  Scalars a(m, 1.0), b(m), c(m, 1.0), r(m);
  a[0] = 0.0;
  c[m - 1] = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    b[k] = -(2.0 + h2 * q[k + 1] / coeff);
    r[k] = h2 * rhs[k + 1] / coeff;
  }
  const Scalars x = thomas(a, b, c, r);
  Scalars sigma(g.size(), 0.0);
  std::copy(x.begin(), x.end(), sigma.begin() + 1);
  return sigma;
}

double tension_residual(const Scalars& sigma, const Scalars& q, const Scalars& rhs, const Grid& g,
                        double coeff) {
  const Scalars d2 = diff2(sigma, g);
  const std::size_t lo = g.periodic() ? 0 : 1;
  const std::size_t hi = g.periodic() ? g.size() : g.size() - 1;
  double r = 0.0;
  for (std::size_t i = lo; i < hi; ++i) r = std::max(r, std::abs(coeff * d2[i] - q[i] * sigma[i] - rhs[i]));
  return r;
}

Scalars curvature_sq(const Curve& eta) { return squared_norms(diff2(eta)); }

Scalars chord_energy(const Points& a, const Points& b, const Grid& g) {
  const std::size_t m = a.size();
  const double h2 = g.spacing() * g.spacing();
  Scalars seg(g.periodic() ? m : m - 1);
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const std::size_t j = (i + 1) % m;
    seg[i] = (a[j] - a[i]).dot(b[j] - b[i]) / h2;
  }
  Scalars out(m);
  if (g.periodic()) {
    for (std::size_t i = 0; i < m; ++i) out[i] = 0.5 * (seg[i] + seg[(i + m - 1) % m]);
    return out;
  }
  for (std::size_t i = 1; i + 1 < m; ++i) out[i] = 0.5 * (seg[i] + seg[i - 1]);
  out[0] = seg[0];
  out[m - 1] = seg[m - 2];
  return out;
}

Scalars stretch_source(const VectorField& eta_t) { return chord_energy(eta_t.values, eta_t.values, eta_t.grid); }

Points flux_divergence(const Scalars& sigma, const Points& eta, const Grid& g, EndpointClosure closure) {
  const std::size_t m = eta.size();
  const double h2 = g.spacing() * g.spacing();
  Points out(m);
  auto interior = [&](std::size_t im, std::size_t i, std::size_t ip) {
    const double sp = 0.5 * (sigma[i] + sigma[ip]);
    const double sm = 0.5 * (sigma[i] + sigma[im]);
    return Vec2((sp * (eta[ip] - eta[i]) - sm * (eta[i] - eta[im])) / h2);
  };
  if (g.periodic()) {
    for (std::size_t i = 0; i < m; ++i) out[i] = interior((i + m - 1) % m, i, (i + 1) % m);
    return out;
  }
  for (std::size_t i = 1; i + 1 < m; ++i) out[i] = interior(i - 1, i, i + 1);
  if (closure == EndpointClosure::Extrapolated) {
    out[0] = 3.0 * out[1] - 3.0 * out[2] + out[3];
    out[m - 1] = 3.0 * out[m - 2] - 3.0 * out[m - 3] + out[m - 4];
    return out;
  }
  const double h = g.spacing();
  const double ds0 = (-3.0 * sigma[0] + 4.0 * sigma[1] - sigma[2]) / (2.0 * h);
  const Vec2 de0 = (-3.0 * eta[0] + 4.0 * eta[1] - eta[2]) / (2.0 * h);
  const double ds1 = (3.0 * sigma[m - 1] - 4.0 * sigma[m - 2] + sigma[m - 3]) / (2.0 * h);
  const Vec2 de1 = (3.0 * eta[m - 1] - 4.0 * eta[m - 2] + eta[m - 3]) / (2.0 * h);
  const Vec2 dd0 = (2.0 * eta[0] - 5.0 * eta[1] + 4.0 * eta[2] - eta[3]) / h2;
  const Vec2 dd1 = (2.0 * eta[m - 1] - 5.0 * eta[m - 2] + 4.0 * eta[m - 3] - eta[m - 4]) / h2;
  out[0] = ds0 * de0 + sigma[0] * dd0;
  out[m - 1] = ds1 * de1 + sigma[m - 1] * dd1;
  return out;
}

TensionField solve_tension_fixed_free(const Curve& eta, const Scalars& source) {
  require_fixed_free(eta.grid);
  Scalars rhs(source.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -source[i];
  return {eta.grid, solve_tension_bvp(curvature_sq(eta), rhs, eta.grid), std::nullopt};
}

TensionField solve_tension_fixed_free(const Curve& eta, const VectorField& eta_t) {
  require_same_grid(eta.grid, eta_t.grid);
  return solve_tension_fixed_free(eta, stretch_source(eta_t));
}

TensionField solve_tension_periodic(const Curve& gamma, const Scalars& source) {
  require_periodic(gamma.grid);
  const Scalars q = curvature_sq(gamma);
  if (std::sqrt(*std::max_element(q.begin(), q.end())) < kFlatCurvature)
    fail(ErrorKind::FlatCurve, "periodic tension problem needs nonzero curvature");
  Scalars rhs(source.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -source[i];
  return {gamma.grid, solve_tension_bvp(q, rhs, gamma.grid), std::nullopt};
}

TensionField solve_tension_periodic(const Curve& gamma, const VectorField& eta_t) {
  require_same_grid(gamma.grid, eta_t.grid);
  return solve_tension_periodic(gamma, stretch_source(eta_t));
}

TensionField solve_tension(const Curve& eta, const VectorField& eta_t) {
  return eta.grid.periodic() ? solve_tension_periodic(eta, eta_t) : solve_tension_fixed_free(eta, eta_t);
}

Projection orthogonal_project_full(const Curve& gamma, const VectorField& z) {
  require_same_grid(gamma.grid, z.grid);
  const Grid& g = gamma.grid;
  const Scalars q = curvature_sq(gamma);
  if (g.periodic() && std::sqrt(*std::max_element(q.begin(), q.end())) < kFlatCurvature)
    fail(ErrorKind::FlatCurve, "periodic projection needs nonzero curvature");
  const Scalars rhs = dots(diff1(z.values, g), diff1(gamma));
  Scalars sigma = solve_tension_bvp(q, rhs, g);
  const Points corr = flux_divergence(sigma, gamma.values, g, EndpointClosure::Extrapolated);
  VectorField out = z;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] -= corr[i];
  return {std::move(out), std::move(sigma)};
}

VectorField orthogonal_project(const Curve& gamma, const VectorField& z) {
  return orthogonal_project_full(gamma, z).field;
}

PeriodicPhiReport periodic_phi(const Scalars& kappa, const Grid& g) {
  require_periodic(g);
  const std::size_t m = g.size();
  if (kappa.size() != m) fail(ErrorKind::GridMismatch, "kappa does not match the grid");
  double kmax = 0.0;
  for (double k : kappa) kmax = std::max(kmax, std::abs(k));
  if (kmax < kFlatCurvature) fail(ErrorKind::FlatCurve, "kappa vanishes identically");

  const double h = g.spacing();
  // kappa^2 on [0,1] by periodic linear interpolation of the node values.
  auto k2 = [&](std::size_t i, double frac) {
    const double a = kappa[i % m] * kappa[i % m];
    const double b = kappa[(i + 1) % m] * kappa[(i + 1) % m];
    return (1.0 - frac) * a + frac * b;
  };
  // Columns: (phi1, phi1', phi2, phi2') sampled at nodes 0..m.
  std::vector<Eigen::Vector4d> y(m + 1);
  y[0] = Eigen::Vector4d(1.0, 0.0, 0.0, 1.0);
  auto f = [](const Eigen::Vector4d& v, double q) {
    return Eigen::Vector4d(v[1], q * v[0], v[3], q * v[2]);
  };
  for (std::size_t i = 0; i < m; ++i) {
    const double q0 = k2(i, 0.0), qh = k2(i, 0.5), q1 = k2(i, 1.0);
    const Eigen::Vector4d a1 = f(y[i], q0);
    const Eigen::Vector4d a2 = f(y[i] + 0.5 * h * a1, qh);
    const Eigen::Vector4d a3 = f(y[i] + 0.5 * h * a2, qh);
    const Eigen::Vector4d a4 = f(y[i] + h * a3, q1);
    y[i + 1] = y[i] + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  }
  const Eigen::Vector4d& e = y[m];
  Eigen::Matrix2d sys;
  sys << e[0] - 1.0, e[2], e[1], e[3] - 1.0;
  const double det = sys.determinant();
  if (std::abs(det) < 1e-14) fail(ErrorKind::FlatCurve, "monodromy has eigenvalue 1");
  const Eigen::Vector2d ab = sys.inverse() * Eigen::Vector2d(0.0, 1.0);

  PeriodicPhiReport rep;
  rep.phi.resize(m);
  for (std::size_t i = 0; i < m; ++i) rep.phi[i] = ab[0] * y[i][0] + ab[1] * y[i][2];
  Scalars k2n(m);
  for (std::size_t i = 0; i < m; ++i) k2n[i] = kappa[i] * kappa[i];
  rep.rho = trapz(k2n, g);
  rep.lower_bound = std::exp(-0.5 * rep.rho) / rep.rho;
  rep.upper_bound = 1.0 + 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  rep.min_phi = *std::min_element(rep.phi.begin(), rep.phi.end());
  rep.max_phi = *std::max_element(rep.phi.begin(), rep.phi.end());
  rep.lower_ok = rep.min_phi >= rep.lower_bound;
  rep.upper_ok = rep.max_phi <= rep.upper_bound;
  return rep;
}

TensionField solve_tension_free_length(const Curve& eta, const VectorField& eta_t, double ell) {
  require_fixed_free(eta.grid);
  require_same_grid(eta.grid, eta_t.grid);
  if (!(ell > 0.0)) fail(ErrorKind::InvalidArgument, "ell must be positive");
  const Grid& g = eta.grid;
  const Scalars q = curvature_sq(eta);
  const Scalars f = stretch_source(eta_t);
  Scalars minus_f(f.size()), ones(f.size(), 1.0);
  for (std::size_t i = 0; i < f.size(); ++i) minus_f[i] = -f[i];
  const double l2 = ell * ell;
  const Scalars s1 = solve_tension_bvp(q, minus_f, g, l2);
  const Scalars s2 = solve_tension_bvp(q, ones, g, l2);
  const double i2 = trapz(s2, g);
  if (!(std::abs(i2) > 0.0)) fail(ErrorKind::SolveFailure, "degenerate mean constraint");
  const double c = -trapz(s1, g) / i2;
  Scalars sigma(f.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = s1[i] + c * s2[i];
  sigma.front() = 0.0;
  sigma.back() = 0.0;
  return {g, std::move(sigma), c};
}

double free_length_residual(const TensionField& t, const Curve& eta, const VectorField& eta_t, double ell) {
  const Scalars q = curvature_sq(eta);
  const Scalars f = stretch_source(eta_t);
  Scalars rhs(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = t.constant_c.value_or(0.0) - f[i];
  return tension_residual(t.sigma, q, rhs, eta.grid, ell * ell);
}

}  // namespace whip
