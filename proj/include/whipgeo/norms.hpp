#ifndef WHIPGEO_NORMS_HPP
#define WHIPGEO_NORMS_HPP

#include "whipgeo/grid.hpp"

namespace whip {

// sqrt( trapz (1-s^2)^j |f^(k)|^2 ), FixedFreeOdd grids only, k <= 4.
double weighted_norm(const Scalars& f, const Grid& g, double j, int k);
double weighted_norm(const Points& f, const Grid& g, double j, int k);

// max_i (1-s_i^2)^(j/2) |f^(k)(s_i)|.
double weighted_sup(const Scalars& f, const Grid& g, double j, int k);
double weighted_sup(const Points& f, const Grid& g, double j, int k);

// sqrt(E_m), E_m = sum_{j<=m} ||w||^2_{j,j} + ||gamma||^2_{j+1,j+1}; m <= 3.
double energy_norm(const Curve& gamma, const VectorField& w, int m);

}  // namespace whip

#endif
