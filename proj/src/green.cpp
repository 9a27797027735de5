#include "whipgeo/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "whipgeo/tension.hpp"

namespace whip {

Scalars GreenMatrix::apply(const Scalars& f) const {
  Eigen::VectorXd wf(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) wf[j] = weights[j] * f[j];
  const Eigen::VectorXd out = entries * wf;
  return Scalars(out.data(), out.data() + out.size());
}

double GreenMatrix::symmetry_residual() const { return (entries - entries.transpose()).cwiseAbs().maxCoeff(); }

double GreenMatrix::min_entry() const { return entries.minCoeff(); }

GreenMatrix green_matrix(const Curve& gamma) {
  const Grid& g = gamma.grid;
  const std::size_t m = g.size();
  const Scalars q = curvature_sq(gamma);
  GreenMatrix G{g, Eigen::MatrixXd::Zero(m, m), g.weights()};
  const std::size_t lo = g.periodic() ? 0 : 1;
  const std::size_t hi = g.periodic() ? m : m - 1;
  Scalars rhs(m, 0.0);
  for (std::size_t j = lo; j < hi; ++j) {
    rhs[j] = -1.0 / g.spacing();
    const Scalars col = solve_tension_bvp(q, rhs, g);
    rhs[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) G.entries(i, j) = col[i];
  }
  return G;
}

double green_rho(const Curve& gamma) {
  require_fixed_free(gamma.grid);
  const Grid& g = gamma.grid;
  const Scalars q = curvature_sq(gamma);
  const std::size_t c = g.center();
  const double h = g.spacing();
  double rho = 0.0;
  for (std::size_t i = c; i < g.size(); ++i) {
    const double w = (i == c || i + 1 == g.size()) ? 0.5 * h : h;
    rho += w * (1.0 - g.node(i)) * q[i];
  }
  return rho;
}

GreenBoundsReport green_bounds_check(const GreenMatrix& G, const Curve& gamma) {
  require_fixed_free(G.grid);
  require_same_grid(G.grid, gamma.grid);
  const Grid& g = G.grid;
  const std::size_t m = g.size();
  const std::size_t n = m - 1;
  const std::size_t c = g.center();

  GreenBoundsReport rep;
  rep.rho = green_rho(gamma);
  rep.lower_factor = std::exp(-rep.rho) / (1.0 + rep.rho);
  const double inf = std::numeric_limits<double>::infinity();
  rep.upper.margin = rep.lower.margin = inf;
  rep.literal_upper.margin = rep.literal_lower.margin = inf;
  auto track = [](BoundLocation& loc, double margin, double s, double x) {
    if (margin < loc.margin) loc = {margin, s, x};
  };

  // Boundary rows and columns vanish identically on both sides of every bound.
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double s = g.node(i);
    for (std::size_t j = 1; j + 1 < m; ++j) {
      const double x = g.node(j);
      const double as = 1.0 - std::abs(s), ax = 1.0 - std::abs(x);
      const double folded = G.entries(i, j) + G.entries(i, n - j);
      const double cap = std::min(as, ax);
      const double floor = as * ax * rep.lower_factor;
      track(rep.literal_upper, cap - 0.5 * folded, s, x);
      track(rep.literal_lower, G.entries(i, j) - floor, s, x);
      if (i >= c && j >= c) {
        track(rep.upper, cap - folded, s, x);
        track(rep.lower, folded - floor, s, x);
      }
    }
  }
  rep.upper_ok = rep.upper.margin >= -kBoundRoundoff;
  rep.lower_ok = rep.lower.margin >= -kBoundRoundoff;
  rep.literal_upper_ok = rep.literal_upper.margin >= -kBoundRoundoff;
  rep.literal_lower_ok = rep.literal_lower.margin >= -kBoundRoundoff;
  rep.symmetry_residual = G.symmetry_residual();
  rep.min_entry = G.min_entry();
  return rep;
}

}  // namespace whip
