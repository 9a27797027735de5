#include "whipgeo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace whip {

Grid::Grid(int n, BoundaryKind kind) : n_(n), kind_(kind) {
  h_ = kind == BoundaryKind::Periodic ? 1.0 / n : 2.0 / n;
}

double Grid::node(std::size_t i) const {
  if (periodic()) return static_cast<double>(i) / n_;
  // Exact zero at the center node, exact mirror images about it.
  const long k = static_cast<long>(i) - n_ / 2;
  return 2.0 * static_cast<double>(k) / n_;
}

Scalars Grid::nodes() const {
  Scalars s(size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = node(i);
  return s;
}

Scalars Grid::weights() const {
  Scalars w(size(), h_);
  if (!periodic()) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  return w;
}

Grid make_grid(int n, BoundaryKind kind) {
  if (n % 2 != 0) fail(ErrorKind::OddNodeCount, "n must be even, got " + std::to_string(n));
  if (n < 8) fail(ErrorKind::GridTooSmall, "n must be at least 8, got " + std::to_string(n));
  return Grid(n, kind);
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) fail(ErrorKind::GridMismatch, "fields live on different grids");
}

void require_fixed_free(const Grid& g) {
  if (g.periodic()) fail(ErrorKind::GridMismatch, "operation requires a FixedFreeOdd grid");
}

void require_periodic(const Grid& g) {
  if (!g.periodic()) fail(ErrorKind::GridMismatch, "operation requires a Periodic grid");
}

Scalars sample_scalar(const Grid& g, const std::function<double(double)>& fn) {
  Scalars v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(g.node(i));
  return v;
}

Points diff1(const Curve& c) { return diff1(c.values, c.grid); }
Points diff2(const Curve& c) { return diff2(c.values, c.grid); }

double trapz(const Scalars& f, const Grid& g) {
  const Scalars w = g.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i];
  return acc;
}

namespace {
template <class T>
std::vector<T> cumtrapz_center_impl(const std::vector<T>& f, const Grid& g) {
  const double h = g.spacing();
  std::vector<T> out(f.size());
  const std::size_t c = g.center();
  out[c] = f[c] * 0.0;
  for (std::size_t i = c + 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i] + f[i - 1]);
  for (std::size_t i = c; i-- > 0;) out[i] = out[i + 1] - 0.5 * h * (f[i] + f[i + 1]);
  return out;
}
}  // namespace

Scalars cumtrapz_center(const Scalars& f, const Grid& g) { return cumtrapz_center_impl(f, g); }
Points cumtrapz_center(const Points& f, const Grid& g) { return cumtrapz_center_impl(f, g); }

Scalars squared_norms(const Points& v) {
  Scalars out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].squaredNorm();
  return out;
}

Scalars dots(const Points& a, const Points& b) {
  Scalars out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].dot(b[i]);
  return out;
}

Scalars enforce_odd(const Scalars& f) {
  const std::size_t n = f.size() - 1;
  Scalars out(f.size());
  for (std::size_t i = 0; i <= n; ++i) out[i] = 0.5 * (f[i] - f[n - i]);
  return out;
}

Scalars enforce_even(const Scalars& f) {
  const std::size_t n = f.size() - 1;
  Scalars out(f.size());
  for (std::size_t i = 0; i <= n; ++i) out[i] = 0.5 * (f[i] + f[n - i]);
  return out;
}

double odd_residual(const Points& f) {
  const std::size_t n = f.size() - 1;
  double r = 0.0;
  for (std::size_t i = 0; i <= n; ++i) r = std::max(r, (f[i] + f[n - i]).norm());
  return r;
}

double even_residual(const Scalars& f) {
  const std::size_t n = f.size() - 1;
  double r = 0.0;
  for (std::size_t i = 0; i <= n; ++i) r = std::max(r, std::abs(f[i] - f[n - i]));
  return r;
}

double sup_norm(const Scalars& f) {
  double r = 0.0;
  for (double x : f) r = std::max(r, std::abs(x));
  return r;
}

double sup_diff(const Points& a, const Points& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, (a[i] - b[i]).norm());
  return r;
}

double sup_diff(const Scalars& a, const Scalars& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace whip
