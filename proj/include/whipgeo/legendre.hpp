#ifndef WHIPGEO_LEGENDRE_HPP
#define WHIPGEO_LEGENDRE_HPP

#include "whipgeo/grid.hpp"

namespace whip {

double legendre(int k, double x);
double legendre_deriv(int k, double x);
Scalars legendre(int k, const Grid& g);
Scalars legendre_deriv(int k, const Grid& g);

}  // namespace whip

#endif
