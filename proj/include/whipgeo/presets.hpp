#ifndef WHIPGEO_PRESETS_HPP
#define WHIPGEO_PRESETS_HPP

#include <random>
#include <string>

#include "whipgeo/charts.hpp"

namespace whip {

using Rng = std::mt19937_64;

// A curve together with the angle field it was built from.
struct ChartedCurve {
  Curve curve;
  AngularField theta;
};

ChartedCurve straight_rod(const Grid& g);
// theta(s) = sum_k c_k s^(2k).
ChartedCurve curve_from_even_poly(const Grid& g, const Scalars& coeffs);
// theta(s) = a (1 - cos(pi s)).
ChartedCurve sine_perturbed_rod(const Grid& g, double a);
// theta(s) = theta0 + sum_{k=1..modes} c_k cos(k pi s), c_k ~ N(0, (amp/k)^2).
ChartedCurve random_smooth_curve(const Grid& g, Rng& rng, double amplitude, int modes = 4);
// Named presets: straight, spiral, perturbed, random.
ChartedCurve curve_preset(const std::string& name, const Grid& g, Rng& rng);

// Even profile sum_{k=0..modes-1} b_k cos(k pi s), b_k ~ N(0, (amp/(1+k))^2).
Scalars random_even_profile(const Grid& g, Rng& rng, double amplitude, int modes = 4);

// w(s) = int_0^s beta(x) gamma'(x)^perp dx with gamma' = exp(i theta); odd when beta is even.
VectorField tangent_field(const AngularField& theta, const Scalars& beta);

// Unit-length circle traversed counterclockwise, centered at the origin.
Curve unit_circle(const Grid& g);
// Radial Fourier perturbation r(u) = 1 + sum a_k cos(k u) + b_k sin(k u), k = 2..modes,
// resampled at uniform arclength and scaled to total length 1.
Curve perturbed_circle(const Grid& g, Rng& rng, double amplitude, int modes = 4);
// On unit_circle: w = f N + g T with g = amplitude cos(2 pi k s) and f = g'/(2 pi), N the inward normal.
// Exactly tangent and horizontal; k = 1 is a translation.
VectorField circle_mode_field(const Grid& g, int k, double amplitude);
// Turning curvature |gamma''| of a periodic curve by centered differences.
Scalars periodic_curvature(const Curve& gamma);
// Periodic zero-mean tangent field with w' = beta gamma'^perp, beta adjusted so w closes.
VectorField periodic_tangent_field(const Curve& gamma, Scalars beta);

}  // namespace whip

#endif
