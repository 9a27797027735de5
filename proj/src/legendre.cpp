#include "whipgeo/legendre.hpp"

namespace whip {

double legendre(int k, double x) {
  if (k < 0) fail(ErrorKind::InvalidArgument, "Legendre degree must be nonnegative");
  if (k == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int j = 1; j < k; ++j) {
    const double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// P'_{j+1} = P'_{j-1} + (2j+1) P_j.
double legendre_deriv(int k, double x) {
  if (k < 0) fail(ErrorKind::InvalidArgument, "Legendre degree must be nonnegative");
  if (k == 0) return 0.0;
  double d_prev = 0.0, d_cur = 1.0;
  for (int j = 1; j < k; ++j) {
    const double d_next = d_prev + (2.0 * j + 1.0) * legendre(j, x);
    d_prev = d_cur;
    d_cur = d_next;
  }
  return d_cur;
}

Scalars legendre(int k, const Grid& g) {
  return sample_scalar(g, [k](double s) { return legendre(k, s); });
}

Scalars legendre_deriv(int k, const Grid& g) {
  return sample_scalar(g, [k](double s) { return legendre_deriv(k, s); });
}

}  // namespace whip
