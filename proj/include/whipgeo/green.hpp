#ifndef WHIPGEO_GREEN_HPP
#define WHIPGEO_GREEN_HPP

#include <Eigen/Dense>

#include "whipgeo/grid.hpp"

namespace whip {

// entries(i, j) ~ G(s_i, x_j); apply() integrates against the trapezoid weights.
struct GreenMatrix {
  Grid grid;
  Eigen::MatrixXd entries;
  Scalars weights;

  Scalars apply(const Scalars& f) const;
  double symmetry_residual() const;
  double min_entry() const;
};

// Column j solves sigma'' - |gamma''|^2 sigma = -delta_j / spacing (Dirichlet or cyclic).
GreenMatrix green_matrix(const Curve& gamma);

struct BoundLocation {
  double margin = 0.0;
  double s = 0.0;
  double x = 0.0;
};

// Upper and lower bounds are checked on the folded kernel G(s,x) + G(s,-x), s, x in [0,1],
// which is the Green function of the half-interval problem with sigma'(0) = 0.
// The literal_* fields check the unfolded forms: (G(s,x) + G(s,-x))/2 <= min(1-|s|, 1-|x|)
// and G(s,x) >= (1-|s|)(1-|x|) e^-rho / (1+rho) over all node pairs.
struct GreenBoundsReport {
  double rho = 0.0;
  double lower_factor = 0.0;
  bool upper_ok = false;
  bool lower_ok = false;
  BoundLocation upper;
  BoundLocation lower;
  bool literal_upper_ok = false;
  bool literal_lower_ok = false;
  BoundLocation literal_upper;
  BoundLocation literal_lower;
  double symmetry_residual = 0.0;
  double min_entry = 0.0;
};

inline constexpr double kBoundRoundoff = 1e-12;

// rho = trapz over [0,1] of (1-s) |gamma''|^2.
double green_rho(const Curve& gamma);
GreenBoundsReport green_bounds_check(const GreenMatrix& G, const Curve& gamma);

}  // namespace whip

#endif
