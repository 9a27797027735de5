#include "whipgeo/norms.hpp"

#include <algorithm>
#include <cmath>

namespace whip {
namespace {

Scalars weight(const Grid& g, double power) {
  Scalars w(g.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double s = g.node(i);
    const double base = std::max(0.0, 1.0 - s * s);
    w[i] = power == 0.0 ? 1.0 : std::pow(base, power);
  }
  return w;
}

double norm_from_sq(const Scalars& sq, const Grid& g, double j) {
  const Scalars w = weight(g, j);
  Scalars integrand(sq.size());
  for (std::size_t i = 0; i < sq.size(); ++i) integrand[i] = w[i] * sq[i];
  return std::sqrt(trapz(integrand, g));
}

double sup_from_abs(const Scalars& mag, const Grid& g, double j) {
  const Scalars w = weight(g, 0.5 * j);
  double r = 0.0;
  for (std::size_t i = 0; i < mag.size(); ++i) r = std::max(r, w[i] * mag[i]);
  return r;
}

}  // namespace

double weighted_norm(const Scalars& f, const Grid& g, double j, int k) {
  require_fixed_free(g);
  Scalars d = diffk(f, g, k);
  for (double& x : d) x *= x;
  return norm_from_sq(d, g, j);
}

double weighted_norm(const Points& f, const Grid& g, double j, int k) {
  require_fixed_free(g);
  return norm_from_sq(squared_norms(diffk(f, g, k)), g, j);
}

double weighted_sup(const Scalars& f, const Grid& g, double j, int k) {
  require_fixed_free(g);
  Scalars d = diffk(f, g, k);
  for (double& x : d) x = std::abs(x);
  return sup_from_abs(d, g, j);
}

double weighted_sup(const Points& f, const Grid& g, double j, int k) {
  require_fixed_free(g);
  const Points d = diffk(f, g, k);
  Scalars mag(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) mag[i] = d[i].norm();
  return sup_from_abs(mag, g, j);
}

double energy_norm(const Curve& gamma, const VectorField& w, int m) {
  require_same_grid(gamma.grid, w.grid);
  if (m < 0 || m > 3) fail(ErrorKind::StencilOrder, "energy order must lie in [0,3]");
  double e = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double a = weighted_norm(w.values, w.grid, j, j);
    const double b = weighted_norm(gamma.values, gamma.grid, j + 1, j + 1);
    e += a * a + b * b;
  }
  return std::sqrt(e);
}

}  // namespace whip
