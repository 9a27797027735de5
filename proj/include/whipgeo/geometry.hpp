#ifndef WHIPGEO_GEOMETRY_HPP
#define WHIPGEO_GEOMETRY_HPP

#include <vector>

#include "whipgeo/green.hpp"

namespace whip {

// sigma_uv(s) = int G(s,x) <u'(x), v'(x)> dx.
Scalars second_fundamental_sigma(const GreenMatrix& G, const VectorField& u, const VectorField& v);
Scalars second_fundamental_sigma(const Curve& gamma, const VectorField& u, const VectorField& v);

struct SectionReport {
  double K = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double lower_bound = 0.0;
  // lambda_1^2 e^-rho / (4 (1+rho)) with lambda_1 = 2; fixed-free grids only.
  double lower_bound_spectral = 0.0;
  double rho = 0.0;
};

inline constexpr double kParallelTolerance = 1e-10;

// Fixed-free: lower_bound = e^-rho/(1+rho), rho = int_0^1 (1-s)|gamma''|^2.
// Periodic: lower_bound = 4 pi^2 e^(-rho/2)/rho, rho = int kappa^2; fields should have zero mean.
SectionReport sectional_curvature(const GreenMatrix& G, const Curve& gamma, const VectorField& u,
                                  const VectorField& v);
SectionReport sectional_curvature(const Curve& gamma, const VectorField& u, const VectorField& v);

// min over node pairs of |u'(s)|^2|v'(x)|^2 + |u'(x)|^2|v'(s)|^2 - 2<u'(s),v'(s)><u'(x),v'(x)>.
double min_section_integrand(const VectorField& u, const VectorField& v);

struct ProbeRow {
  int n = 0;
  double K = 0.0;
};
inline constexpr int kMaxProbeDegree = 8;
// K((0,P_1), (0,P_{2n-1})) on the straight rod for n = 2..n_max.
std::vector<ProbeRow> curvature_unboundedness_probe(const Grid& g, int n_max);

// int kappa^2 over the circle; FlatCurve when kappa vanishes.
double periodic_rho(const Curve& gamma);
double periodic_curvature_bound(const Curve& gamma);

}  // namespace whip

#endif
