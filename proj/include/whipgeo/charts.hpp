#ifndef WHIPGEO_CHARTS_HPP
#define WHIPGEO_CHARTS_HPP

#include "whipgeo/grid.hpp"

namespace whip {

// eta' = exp(psi + i theta) at every node.
struct AngularField {
  Grid grid;
  Scalars theta;
  Scalars psi;

  AngularField() = default;
  AngularField(Grid g, Scalars th) : grid(g), theta(std::move(th)), psi(grid.size(), 0.0) {}
  AngularField(Grid g, Scalars th, Scalars ps) : grid(g), theta(std::move(th)), psi(std::move(ps)) {}
};

inline constexpr double kDegenerateSpeed = 1e-8;

// Node values of exp(psi + i theta).
Points exp_chart(const AngularField& a);
// Angles of given node tangents, unwrapped outward from the center node.
AngularField angles_of(const Points& tangents, const Grid& g, double branch_at_zero);

// Cumulative trapezoid of exp_chart from the center node; gamma(0) = 0.
Curve theta_to_curve(const AngularField& a);
AngularField curve_to_theta(const Curve& c, double branch_at_zero = 0.0);
AngularField log_chart(const Curve& c, double branch_at_zero = 0.0);
Curve exp_chart_curve(const AngularField& a);

// Rebuilds an odd curve from the center so every chord has length exactly spacing,
// keeping the chord directions of the input.
Curve renormalize_arclength(const Curve& c);

struct CompatibilityReport {
  double unit_speed_err = 0.0;
  double tangency_err = 0.0;
  double oddness_err = 0.0;
  double worst() const;
};

CompatibilityReport check_compatibility(const Curve& gamma, const VectorField& w);
double unit_speed_error(const Curve& c);

// Discretization-aware admissibility threshold for compatibility residuals on a grid:
// 1e-6 plus a second-order term scaled by the data magnitude.
double compatibility_tolerance(const Grid& g, double scale = 1.0);
// As above with scale 1 + max|w'|, plus the leading centered-difference truncation of the
// tangency residual, h^2 (|D^3 w| |gamma'| + |w'| |D^3 gamma|) / 3, measured on the data.
double compatibility_tolerance(const Curve& gamma, const VectorField& w);

}  // namespace whip

#endif
