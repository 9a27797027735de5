#include "whipgeo/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "whipgeo/tension.hpp"

namespace whip {

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::L2: return "L2";
    case MetricKind::MichorMumford: return "MichorMumford";
    case MetricKind::H1dot: return "H1dot";
  }
  return "?";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  if (name == "L2" || name == "l2") return MetricKind::L2;
  if (name == "MichorMumford" || name == "mm" || name == "MM") return MetricKind::MichorMumford;
  if (name == "H1dot" || name == "h1dot") return MetricKind::H1dot;
  return std::nullopt;
}

namespace {

Points unit_tangents(const Curve& eta, Scalars* speed = nullptr) {
  Points d = diff1(eta);
  if (speed) speed->resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double len = d[i].norm();
    if (len < kDegenerateSpeed)
      fail(ErrorKind::DegenerateImmersion, "|eta'| vanishes at node " + std::to_string(i));
    if (speed) (*speed)[i] = len;
    d[i] /= len;
  }
  return d;
}

// int_0^s <w', T> written as <w,T>(s) - <w,T>(0) - int_0^s <w, T'>; along vertical fields the
// remaining integrand is <T, T'> = 0, so the kernel of DPhi survives discretization.
Scalars tangential_growth(const VectorField& w, const Points& t, const Grid& g) {
  const Scalars wt = dots(w.values, t);
  const Scalars drift = cumtrapz_center(dots(w.values, diff1(t, g)), g);
  const double w0 = wt[g.center()];
  Scalars out(wt.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = wt[i] - w0 - drift[i];
  return out;
}

// Piecewise cubic Hermite interpolant through node values and node slopes.
class Hermite {
 public:
  Hermite(const Grid& g, const Points& p, const Points& m) : g_(g), p_(p), m_(m) {}

  std::size_t segment(double x) const {
    const double rel = (x - g_.node(0)) / g_.spacing();
    const auto last = static_cast<double>(p_.size() - 2);
    return static_cast<std::size_t>(std::clamp(std::floor(rel), 0.0, last));
  }

  Vec2 value(std::size_t i, double x) const {
    const double h = g_.spacing();
    const double t = (x - g_.node(i)) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p_[i] + (t3 - 2 * t2 + t) * h * m_[i] + (-2 * t3 + 3 * t2) * p_[i + 1] +
           (t3 - t2) * h * m_[i + 1];
  }

  Vec2 slope(std::size_t i, double x) const {
    const double h = g_.spacing();
    const double t = (x - g_.node(i)) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * p_[i] + (-6 * t2 + 6 * t) * p_[i + 1]) / h + (3 * t2 - 4 * t + 1) * m_[i] +
           (3 * t2 - 2 * t) * m_[i + 1];
  }

  // int_a^b |slope| inside segment i, 5-point Gauss-Legendre.
  double arclength(std::size_t i, double a, double b) const {
    static constexpr std::array<double, 5> x = {0.0, -0.5384693101056831, 0.5384693101056831,
                                                -0.9061798459386640, 0.9061798459386640};
    static constexpr std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                0.2369268850561891, 0.2369268850561891};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int k = 0; k < 5; ++k) sum += w[k] * slope(i, mid + half * x[k]).norm();
    return half * sum;
  }

 private:
  Grid g_;
  const Points& p_;
  const Points& m_;
};

// Arclength table of eta measured from the center node, and the parameters where arclength
// equals each target. Targets are assumed monotone and within the table.
struct ArclengthMap {
  Scalars cumulative;  // at nodes, zero at the center
  double length = 0.0;
};

ArclengthMap arclength_map(const Hermite& H, const Grid& g) {
  const std::size_t m = g.size();
  const std::size_t c = g.center();
  ArclengthMap out;
  out.cumulative.assign(m, 0.0);
  for (std::size_t i = c; i + 1 < m; ++i)
    out.cumulative[i + 1] = out.cumulative[i] + H.arclength(i, g.node(i), g.node(i + 1));
  for (std::size_t i = c; i-- > 0;) out.cumulative[i] = out.cumulative[i + 1] - H.arclength(i, g.node(i), g.node(i + 1));
  out.length = out.cumulative[m - 1] - out.cumulative[0];
  return out;
}

double invert_arclength(const Hermite& H, const Grid& g, const ArclengthMap& map, double target) {
  const Scalars& S = map.cumulative;
  const std::size_t m = S.size();
  if (target <= S.front()) return g.node(0);
  if (target >= S.back()) return g.node(m - 1);
  const auto it = std::upper_bound(S.begin(), S.end(), target);
  const std::size_t i = static_cast<std::size_t>(it - S.begin()) - 1;
  double lo = g.node(i), hi = g.node(i + 1);
  double x = lo + (target - S[i]) / (S[i + 1] - S[i]) * (hi - lo);
  for (int iter = 0; iter < 60; ++iter) {
    const double f = S[i] + H.arclength(i, g.node(i), x) - target;
    if (std::abs(f) < 1e-15) break;
    if (f > 0) hi = x; else lo = x;
    const double speed = H.slope(i, x).norm();
    double next = speed > 0 ? x - f / speed : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-16) { x = next; break; }
    x = next;
  }
  return x;
}

struct Reparam {
  std::vector<std::size_t> seg;
  Scalars param;
  double length = 0.0;
};

Reparam unit_speed_params(const Curve& eta, const Points& slopes) {
  require_fixed_free(eta.grid);
  const Grid& g = eta.grid;
  for (std::size_t i = 0; i < slopes.size(); ++i)
    if (slopes[i].norm() < kDegenerateSpeed)
      fail(ErrorKind::DegenerateImmersion, "|eta'| vanishes at node " + std::to_string(i));
  const Hermite H(g, eta.values, slopes);
  const ArclengthMap map = arclength_map(H, g);
  if (std::abs(map.length - 2.0) > kLengthTolerance * 2.0)
    fail(ErrorKind::LengthMismatch, "curve length " + std::to_string(map.length) + " is not 2 within 1%");
  Reparam r;
  r.length = map.length;
  const std::size_t m = g.size();
  r.seg.resize(m);
  r.param.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = invert_arclength(H, g, map, g.node(i) * map.length / 2.0);
    r.param[i] = x;
    r.seg[i] = H.segment(x);
  }
  return r;
}

}  // namespace

double metric_inner(MetricKind kind, const Curve& gamma, const VectorField& u, const VectorField& v) {
  require_same_grid(gamma.grid, u.grid);
  require_same_grid(gamma.grid, v.grid);
  const Grid& g = gamma.grid;
  switch (kind) {
    case MetricKind::L2: return trapz(dots(u.values, v.values), g);
    case MetricKind::MichorMumford: {
      const Points t = unit_tangents(gamma);
      Scalars f(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) f[i] = u[i].dot(perp(t[i])) * v[i].dot(perp(t[i]));
      return trapz(f, g);
    }
    case MetricKind::H1dot: return trapz(dots(diff1(u.values, g), diff1(v.values, g)), g);
  }
  return 0.0;
}

Curve reparametrize_unit_speed(const Curve& eta) {
  const Points slopes = diff1(eta);
  const Reparam r = unit_speed_params(eta, slopes);
  const Hermite H(eta.grid, eta.values, slopes);
  Curve out(eta.grid);
  const double scale = 2.0 / r.length;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * H.value(r.seg[i], r.param[i]);
  return enforce_odd(out);
}

VectorField dphi(const Curve& eta, const VectorField& w) {
  require_same_grid(eta.grid, w.grid);
  const Grid& g = eta.grid;
  const Points t = unit_tangents(eta);
  const Scalars along = tangential_growth(w, t, g);
  Points beta(w.size());
  for (std::size_t i = 0; i < beta.size(); ++i) beta[i] = w[i] - along[i] * t[i];

  const Points slopes = diff1(eta);
  const Reparam r = unit_speed_params(eta, slopes);
  const Points beta_slopes = diff1(beta, g);
  const Hermite H(g, beta, beta_slopes);
  VectorField out(g);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = H.value(r.seg[i], r.param[i]);
  return enforce_odd(out);
}

double modified_invariant_inner(const Curve& eta, const VectorField& w) {
  require_same_grid(eta.grid, w.grid);
  const Grid& g = eta.grid;
  Scalars speed;
  const Points t = unit_tangents(eta, &speed);
  const Scalars f = tangential_growth(w, t, g);
  Scalars normal(t.size()), tangential(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double wn = w[i].dot(perp(t[i]));
    normal[i] = speed[i] * wn * wn;
    tangential[i] = speed[i] * f[i] * f[i];
  }
  return trapz(normal, g) + trapz(tangential, g);
}

double chord_lower_bound(const Curve& gamma1, const Curve& gamma2) {
  require_same_grid(gamma1.grid, gamma2.grid);
  Scalars d(gamma1.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (gamma2[i] - gamma1[i]).norm();
  return trapz(d, gamma1.grid) / std::numbers::sqrt2;
}

double path_length(const std::vector<Curve>& path, MetricKind kind) {
  if (path.size() < 2) fail(ErrorKind::InvalidArgument, "a path needs at least two curves");
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Curve& a = path[k];
    const Curve& b = path[k + 1];
    require_same_grid(a.grid, b.grid);
    VectorField step(a.grid);
    Curve mid(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) {
      step[i] = b[i] - a[i];
      mid[i] = 0.5 * (a[i] + b[i]);
    }
    if (sup_norm(squared_norms(step.values)) == 0.0) continue;
    mid = renormalize_arclength(mid);
    const VectorField tangent = orthogonal_project(mid, step);
    total += std::sqrt(std::max(0.0, metric_inner(kind, mid, tangent, tangent)));
  }
  return total;
}

std::vector<Curve> zigzag_path(const AngularField& theta1, const AngularField& theta2, double freq,
                               const ZigzagOptions& opts) {
  require_same_grid(theta1.grid, theta2.grid);
  if (opts.steps < 1) fail(ErrorKind::InvalidArgument, "zigzag path needs at least one step");
  const Grid& g = theta1.grid;
  const double pi = std::numbers::pi;
  std::vector<Curve> path;
  path.reserve(static_cast<std::size_t>(opts.steps) + 1);
  for (int k = 0; k <= opts.steps; ++k) {
    const double t = static_cast<double>(k) / opts.steps;
    const double bump = opts.amplitude * std::sin(pi * t);
    Scalars theta(g.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double s = g.node(i);
      theta[i] = (1.0 - t) * theta1.theta[i] + t * theta2.theta[i] + bump * (1.0 - s * s) * std::cos(2.0 * pi * freq * s);
    }
    path.push_back(theta_to_curve(AngularField(g, std::move(theta))));
  }
  return path;
}

std::vector<ZigzagRow> zigzag_experiment(const AngularField& theta1, const AngularField& theta2,
                                         const std::vector<double>& freqs, const ZigzagOptions& opts) {
  const double chord = chord_lower_bound(theta_to_curve(theta1), theta_to_curve(theta2));
  std::vector<ZigzagRow> rows;
  for (double f : freqs) {
    const std::vector<Curve> path = zigzag_path(theta1, theta2, f, opts);
    rows.push_back({f, path_length(path, MetricKind::MichorMumford), path_length(path, MetricKind::L2), chord});
  }
  return rows;
}

}  // namespace whip
