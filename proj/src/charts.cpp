#include "whipgeo/charts.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace whip {

Points exp_chart(const AngularField& a) {
  Points t(a.theta.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = std::exp(a.psi[i]);
    t[i] = Vec2(r * std::cos(a.theta[i]), r * std::sin(a.theta[i]));
  }
  return t;
}

AngularField angles_of(const Points& tangents, const Grid& g, double branch_at_zero) {
  const std::size_t m = tangents.size();
  const std::size_t c = g.center();
  Scalars theta(m), psi(m);
  for (std::size_t i = 0; i < m; ++i) psi[i] = std::log(tangents[i].norm());
  const double two_pi = 2.0 * std::numbers::pi;
  const double raw = std::atan2(tangents[c].y(), tangents[c].x());
  theta[c] = raw + two_pi * std::round((branch_at_zero - raw) / two_pi);
  auto turn = [&](std::size_t from, std::size_t to) {
    const Vec2& a = tangents[from];
    const Vec2& b = tangents[to];
    return std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
  };
  for (std::size_t i = c + 1; i < m; ++i) theta[i] = theta[i - 1] + turn(i - 1, i);
  for (std::size_t i = c; i-- > 0;) theta[i] = theta[i + 1] + turn(i + 1, i);
  return AngularField(g, std::move(theta), std::move(psi));
}

Curve exp_chart_curve(const AngularField& a) {
  require_fixed_free(a.grid);
  Curve c(a.grid, cumtrapz_center(exp_chart(a), a.grid), Symmetry::Odd);
  return c;
}

Curve theta_to_curve(const AngularField& a) { return exp_chart_curve(a); }

AngularField log_chart(const Curve& c, double branch_at_zero) {
  const Points d = diff1(c);
  const std::size_t m = d.size();
  const std::size_t lo = c.grid.periodic() ? 0 : 1;
  const std::size_t hi = c.grid.periodic() ? m : m - 1;
  for (std::size_t i = lo; i < hi; ++i)
    if (d[i].norm() < kDegenerateSpeed)
      fail(ErrorKind::DegenerateImmersion, "|eta'| vanishes at node " + std::to_string(i));
  return angles_of(d, c.grid, branch_at_zero);
}

AngularField curve_to_theta(const Curve& c, double branch_at_zero) {
  AngularField a = log_chart(c, branch_at_zero);
  std::fill(a.psi.begin(), a.psi.end(), 0.0);
  return a;
}

Curve renormalize_arclength(const Curve& c) {
  require_fixed_free(c.grid);
  const std::size_t m = c.size();
  const std::size_t ctr = c.grid.center();
  const double h = c.grid.spacing();
  Points dir(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const Vec2 chord = c[i + 1] - c[i];
    const double len = chord.norm();
    if (len < kDegenerateSpeed * h)
      fail(ErrorKind::DegenerateImmersion, "zero-length chord at node " + std::to_string(i));
    dir[i] = chord / len;
  }
  Points p(m);
  p[ctr] = Vec2::Zero();
  for (std::size_t i = ctr; i + 1 < m; ++i) p[i + 1] = p[i] + h * dir[i];
  for (std::size_t i = ctr; i-- > 0;) p[i] = p[i + 1] - h * dir[i];
  return enforce_odd(Curve(c.grid, std::move(p), Symmetry::Odd));
}

double CompatibilityReport::worst() const {
  return std::max({unit_speed_err, tangency_err, oddness_err});
}

double unit_speed_error(const Curve& c) {
  const Points d = diff1(c);
  const std::size_t lo = c.grid.periodic() ? 0 : 1;
  const std::size_t hi = c.grid.periodic() ? d.size() : d.size() - 1;
  double r = 0.0;
  for (std::size_t i = lo; i < hi; ++i) r = std::max(r, std::abs(d[i].norm() - 1.0));
  return r;
}

CompatibilityReport check_compatibility(const Curve& gamma, const VectorField& w) {
  require_same_grid(gamma.grid, w.grid);
  CompatibilityReport rep;
  rep.unit_speed_err = unit_speed_error(gamma);
  const Points dg = diff1(gamma);
  const Points dw = diff1(w.values, w.grid);
  const bool per = gamma.grid.periodic();
  const std::size_t lo = per ? 0 : 1;
  const std::size_t hi = per ? dg.size() : dg.size() - 1;
  for (std::size_t i = lo; i < hi; ++i)
    rep.tangency_err = std::max(rep.tangency_err, std::abs(dg[i].dot(dw[i])));
  if (!per) rep.oddness_err = std::max(odd_residual(gamma.values), odd_residual(w.values));
  return rep;
}

double compatibility_tolerance(const Grid& g, double scale) {
  const double h = g.spacing();
  return 1e-6 + 10.0 * std::max(1.0, scale) * h * h;
}

double compatibility_tolerance(const Curve& gamma, const VectorField& w) {
  require_same_grid(gamma.grid, w.grid);
  const Grid& g = gamma.grid;
  auto sup = [](const Points& p) {
    double m = 0.0;
    for (const Vec2& v : p) m = std::max(m, v.norm());
    return m;
  };
  const double dw = sup(diff1(w.values, g));
  const double d3w = sup(diffk(w.values, g, 3));
  const double dg = sup(diff1(gamma.values, g));
  const double d3g = sup(diffk(gamma.values, g, 3));
  const double h = g.spacing();
  return compatibility_tolerance(g, 1.0 + dw) + h * h * (d3w * dg + dw * d3g) / 3.0;
}

}  // namespace whip
