#include "whipgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "whipgeo/legendre.hpp"
#include "whipgeo/presets.hpp"
#include "whipgeo/tension.hpp"

namespace whip {

Scalars second_fundamental_sigma(const GreenMatrix& G, const VectorField& u, const VectorField& v) {
  require_same_grid(G.grid, u.grid);
  require_same_grid(G.grid, v.grid);
  return G.apply(dots(diff1(u.values, u.grid), diff1(v.values, v.grid)));
}

Scalars second_fundamental_sigma(const Curve& gamma, const VectorField& u, const VectorField& v) {
  return second_fundamental_sigma(green_matrix(gamma), u, v);
}

SectionReport sectional_curvature(const GreenMatrix& G, const Curve& gamma, const VectorField& u,
                                  const VectorField& v) {
  require_same_grid(G.grid, gamma.grid);
  require_same_grid(G.grid, u.grid);
  require_same_grid(G.grid, v.grid);
  const Grid& g = G.grid;
  const std::size_t m = g.size();
  const Scalars w = g.weights();

  SectionReport rep;
  const double uu = trapz(squared_norms(u.values), g);
  const double vv = trapz(squared_norms(v.values), g);
  const double uv = trapz(dots(u.values, v.values), g);
  rep.denominator = uu * vv - uv * uv;
  if (!(rep.denominator > kParallelTolerance))
    fail(ErrorKind::ParallelSection, "Gram determinant " + std::to_string(rep.denominator));

  const Points du = diff1(u.values, g), dv = diff1(v.values, g);
  Eigen::VectorXd a(m), b(m), c(m);
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = w[i] * du[i].squaredNorm();
    b[i] = w[i] * dv[i].squaredNorm();
    c[i] = w[i] * du[i].dot(dv[i]);
  }
  rep.numerator = b.dot(G.entries * a) - c.dot(G.entries * c);
  rep.K = rep.numerator / rep.denominator;

  if (g.periodic()) {
    rep.rho = periodic_rho(gamma);
    rep.lower_bound = periodic_curvature_bound(gamma);
  } else {
    rep.rho = green_rho(gamma);
    rep.lower_bound = std::exp(-rep.rho) / (1.0 + rep.rho);
    const double lambda1 = 2.0;
    rep.lower_bound_spectral = lambda1 * lambda1 * std::exp(-rep.rho) / (4.0 * (1.0 + rep.rho));
  }
  return rep;
}

SectionReport sectional_curvature(const Curve& gamma, const VectorField& u, const VectorField& v) {
  return sectional_curvature(green_matrix(gamma), gamma, u, v);
}

double min_section_integrand(const VectorField& u, const VectorField& v) {
  require_same_grid(u.grid, v.grid);
  const Points du = diff1(u.values, u.grid), dv = diff1(v.values, v.grid);
  const std::size_t m = du.size();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double ai = du[i].squaredNorm(), bi = dv[i].squaredNorm(), ci = du[i].dot(dv[i]);
    for (std::size_t j = 0; j < m; ++j) {
      const double aj = du[j].squaredNorm(), bj = dv[j].squaredNorm(), cj = du[j].dot(dv[j]);
      worst = std::min(worst, ai * bj + aj * bi - 2.0 * ci * cj);
    }
  }
  return worst;
}

std::vector<ProbeRow> curvature_unboundedness_probe(const Grid& g, int n_max) {
  require_fixed_free(g);
  if (n_max < 2 || n_max > kMaxProbeDegree) fail(ErrorKind::InvalidArgument, "n_max must lie in [2,8]");
  const Curve rod = straight_rod(g).curve;
  const GreenMatrix G = green_matrix(rod);
  auto mode = [&](int n) {
    return sample<FieldTag>(g, [n](double s) { return Vec2(0.0, legendre(2 * n - 1, s)); });
  };
  const VectorField u1 = mode(1);
  std::vector<ProbeRow> rows;
  for (int n = 2; n <= n_max; ++n) rows.push_back({n, sectional_curvature(G, rod, u1, mode(n)).K});
  return rows;
}

double periodic_rho(const Curve& gamma) {
  require_periodic(gamma.grid);
  const Scalars k = periodic_curvature(gamma);
  if (*std::max_element(k.begin(), k.end()) < kFlatCurvature)
    fail(ErrorKind::FlatCurve, "curvature vanishes identically");
  Scalars k2(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) k2[i] = k[i] * k[i];
  return trapz(k2, gamma.grid);
}

double periodic_curvature_bound(const Curve& gamma) {
  const double rho = periodic_rho(gamma);
  return 4.0 * std::numbers::pi * std::numbers::pi * std::exp(-0.5 * rho) / rho;
}

}  // namespace whip
