#ifndef WHIPGEO_GRID_HPP
#define WHIPGEO_GRID_HPP

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <vector>

#include "whipgeo/errors.hpp"

namespace whip {

using Vec2 = Eigen::Vector2d;
using Scalars = std::vector<double>;
using Points = std::vector<Vec2>;

enum class BoundaryKind { FixedFreeOdd, Periodic };
enum class Symmetry { None, Odd, Periodic };

// FixedFreeOdd: n+1 nodes s_i = -1 + 2i/n. Periodic: n nodes s_i = i/n.
class Grid {
 public:
  Grid() = default;

  int n() const { return n_; }
  std::size_t size() const { return kind_ == BoundaryKind::Periodic ? n_ : n_ + 1; }
  double spacing() const { return h_; }
  BoundaryKind kind() const { return kind_; }
  bool periodic() const { return kind_ == BoundaryKind::Periodic; }
  double node(std::size_t i) const;
  // Index of s = 0 on FixedFreeOdd grids; 0 on periodic grids.
  std::size_t center() const { return periodic() ? 0 : static_cast<std::size_t>(n_ / 2); }
  Scalars nodes() const;
  Scalars weights() const;

  friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_ && a.kind_ == b.kind_; }
  friend Grid make_grid(int n, BoundaryKind kind);

 private:
  Grid(int n, BoundaryKind kind);
  int n_ = 0;
  double h_ = 0.0;
  BoundaryKind kind_ = BoundaryKind::FixedFreeOdd;
};

Grid make_grid(int n, BoundaryKind kind);
void require_same_grid(const Grid& a, const Grid& b);
void require_fixed_free(const Grid& g);
void require_periodic(const Grid& g);

template <class Tag>
struct PlanarField {
  Grid grid;
  Points values;
  Symmetry symmetry = Symmetry::None;

  PlanarField() = default;
  PlanarField(Grid g, Points v, Symmetry sym = Symmetry::None)
      : grid(g), values(std::move(v)), symmetry(sym) {}
  explicit PlanarField(Grid g) : grid(g), values(g.size(), Vec2::Zero()) {
    symmetry = g.periodic() ? Symmetry::Periodic : Symmetry::None;
  }

  std::size_t size() const { return values.size(); }
  Vec2& operator[](std::size_t i) { return values[i]; }
  const Vec2& operator[](std::size_t i) const { return values[i]; }
};

struct CurveTag {};
struct FieldTag {};
using Curve = PlanarField<CurveTag>;
using VectorField = PlanarField<FieldTag>;

template <class To, class From>
PlanarField<To> retag(const PlanarField<From>& f) {
  return PlanarField<To>(f.grid, f.values, f.symmetry);
}

template <class Tag>
PlanarField<Tag> sample(const Grid& g, const std::function<Vec2(double)>& fn) {
  Points v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(g.node(i));
  return PlanarField<Tag>(g, std::move(v), g.periodic() ? Symmetry::Periodic : Symmetry::None);
}

Scalars sample_scalar(const Grid& g, const std::function<double(double)>& fn);

// Second-order finite differences: centered inside, one-sided at s = +-1, wrapped when periodic.
template <class T>
std::vector<T> diff1(const std::vector<T>& f, const Grid& g) {
  const std::size_t m = f.size();
  const double h = g.spacing();
  std::vector<T> out(m);
  if (g.periodic()) {
    for (std::size_t i = 0; i < m; ++i) out[i] = (f[(i + 1) % m] - f[(i + m - 1) % m]) / (2.0 * h);
    return out;
  }
  for (std::size_t i = 1; i + 1 < m; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  out[m - 1] = (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) / (2.0 * h);
  return out;
}

template <class T>
std::vector<T> diff2(const std::vector<T>& f, const Grid& g) {
  const std::size_t m = f.size();
  const double h2 = g.spacing() * g.spacing();
  std::vector<T> out(m);
  if (g.periodic()) {
    for (std::size_t i = 0; i < m; ++i)
      out[i] = (f[(i + 1) % m] - 2.0 * f[i] + f[(i + m - 1) % m]) / h2;
    return out;
  }
  for (std::size_t i = 1; i + 1 < m; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
  out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  out[m - 1] = (2.0 * f[m - 1] - 5.0 * f[m - 2] + 4.0 * f[m - 3] - f[m - 4]) / h2;
  return out;
}

inline constexpr int kMaxStencilOrder = 4;

template <class T>
std::vector<T> diffk(const std::vector<T>& f, const Grid& g, int k) {
  if (k < 0 || k > kMaxStencilOrder) fail(ErrorKind::StencilOrder, "derivative order must lie in [0,4]");
  switch (k) {
    case 0: return f;
    case 1: return diff1(f, g);
    case 2: return diff2(f, g);
    case 3: return diff1(diff2(f, g), g);
    default: return diff2(diff2(f, g), g);
  }
}

Points diff1(const Curve& c);
Points diff2(const Curve& c);

double trapz(const Scalars& f, const Grid& g);
// Cumulative trapezoid anchored at the center node (value 0 there).
Scalars cumtrapz_center(const Scalars& f, const Grid& g);
Points cumtrapz_center(const Points& f, const Grid& g);

Scalars squared_norms(const Points& v);
Scalars dots(const Points& a, const Points& b);
// Rotation by +90 degrees.
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

template <class Tag>
PlanarField<Tag> enforce_odd(const PlanarField<Tag>& f) {
  require_fixed_free(f.grid);
  const std::size_t n = f.size() - 1;
  PlanarField<Tag> out = f;
  for (std::size_t i = 0; i <= n; ++i) out.values[i] = 0.5 * (f.values[i] - f.values[n - i]);
  out.symmetry = Symmetry::Odd;
  return out;
}

Scalars enforce_odd(const Scalars& f);
Scalars enforce_even(const Scalars& f);
double odd_residual(const Points& f);
double even_residual(const Scalars& f);

double sup_norm(const Scalars& f);
double sup_diff(const Points& a, const Points& b);
double sup_diff(const Scalars& a, const Scalars& b);

}  // namespace whip

#endif
