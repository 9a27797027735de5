#include "whipgeo/presets.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace whip {

namespace {
ChartedCurve from_theta(const Grid& g, Scalars theta) {
  AngularField a(g, std::move(theta));
  return {theta_to_curve(a), a};
}
}  // namespace

ChartedCurve straight_rod(const Grid& g) { return from_theta(g, Scalars(g.size(), 0.0)); }

ChartedCurve curve_from_even_poly(const Grid& g, const Scalars& coeffs) {
  return from_theta(g, sample_scalar(g, [&](double s) {
                      double acc = 0.0, p = 1.0;
                      for (double c : coeffs) {
                        acc += c * p;
                        p *= s * s;
                      }
                      return acc;
                    }));
}

ChartedCurve sine_perturbed_rod(const Grid& g, double a) {
  return from_theta(g, sample_scalar(g, [a](double s) { return a * (1.0 - std::cos(std::numbers::pi * s)); }));
}

ChartedCurve random_smooth_curve(const Grid& g, Rng& rng, double amplitude, int modes) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double theta0 = angle(rng);
  Scalars c(modes + 1, 0.0);
  for (int k = 1; k <= modes; ++k) c[k] = amplitude / k * normal(rng);
  return from_theta(g, sample_scalar(g, [&](double s) {
                      double acc = theta0;
                      for (int k = 1; k <= modes; ++k) acc += c[k] * std::cos(k * std::numbers::pi * s);
                      return acc;
                    }));
}

ChartedCurve curve_preset(const std::string& name, const Grid& g, Rng& rng) {
  if (name == "straight") return straight_rod(g);
  if (name == "spiral") return curve_from_even_poly(g, {0.0, std::numbers::pi / 2});
  if (name == "perturbed") return sine_perturbed_rod(g, 0.4);
  if (name == "random") return random_smooth_curve(g, rng, 0.8);
  fail(ErrorKind::InvalidArgument, "unknown curve preset '" + name + "'");
}

Scalars random_even_profile(const Grid& g, Rng& rng, double amplitude, int modes) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Scalars b(modes);
  for (int k = 0; k < modes; ++k) b[k] = amplitude / (1 + k) * normal(rng);
  return sample_scalar(g, [&](double s) {
    double acc = 0.0;
    for (int k = 0; k < modes; ++k) acc += b[k] * std::cos(k * std::numbers::pi * s);
    return acc;
  });
}

VectorField tangent_field(const AngularField& theta, const Scalars& beta) {
  const Points t = exp_chart(AngularField(theta.grid, theta.theta));
  Points integrand(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) integrand[i] = beta[i] * perp(t[i]);
  VectorField w(theta.grid, cumtrapz_center(integrand, theta.grid), Symmetry::Odd);
  return enforce_odd(w);
}

Curve unit_circle(const Grid& g) {
  require_periodic(g);
  const double r = 1.0 / (2.0 * std::numbers::pi);
  return sample<CurveTag>(g, [r](double s) {
    const double a = 2.0 * std::numbers::pi * s;
    return Vec2(r * std::cos(a), r * std::sin(a));
  });
}

VectorField circle_mode_field(const Grid& g, int k, double amplitude) {
  require_periodic(g);
  const double two_pi = 2.0 * std::numbers::pi;
  return sample<FieldTag>(g, [=](double s) -> Vec2 {
    const double a = two_pi * s;
    const Vec2 t(-std::sin(a), std::cos(a));
    const Vec2 inward(-std::cos(a), -std::sin(a));
    const double gt = amplitude * std::cos(k * a);
    const double fn = -k * amplitude * std::sin(k * a);
    return fn * inward + gt * t;
  });
}

Curve perturbed_circle(const Grid& g, Rng& rng, double amplitude, int modes) {
  require_periodic(g);
  std::normal_distribution<double> normal(0.0, 1.0);
  Scalars a(modes + 1, 0.0), b(modes + 1, 0.0);
  for (int k = 2; k <= modes; ++k) {
    a[k] = amplitude / (k * k) * normal(rng);
    b[k] = amplitude / (k * k) * normal(rng);
  }
  auto radius = [&](double u, double& dr) {
    double r = 1.0;
    dr = 0.0;
    for (int k = 2; k <= modes; ++k) {
      r += a[k] * std::cos(k * u) + b[k] * std::sin(k * u);
      dr += k * (-a[k] * std::sin(k * u) + b[k] * std::cos(k * u));
    }
    return r;
  };
  auto speed = [&](double u) {
    double dr;
    const double r = radius(u, dr);
    return std::hypot(r, dr);
  };
  // Five-point Gauss-Legendre arclength on [u0, u1].
  static const double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                               0.9061798459386640};
  static const double wg[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  auto arc = [&](double u0, double u1) {
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += wg[k] * speed(0.5 * (u0 + u1) + 0.5 * (u1 - u0) * xg[k]);
    return 0.5 * (u1 - u0) * acc;
  };
  const int fine = 64 * g.n();
  const double du = 2.0 * std::numbers::pi / fine;
  Scalars cum(fine + 1, 0.0);
  for (int k = 0; k < fine; ++k) cum[k + 1] = cum[k] + arc(k * du, (k + 1) * du);
  const double total = cum[fine];
  Points p(g.size());
  int seg = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double target = g.node(i) * total;
    while (seg + 1 < fine && cum[seg + 1] <= target) ++seg;
    double u = seg * du + (target - cum[seg]) / (cum[seg + 1] - cum[seg]) * du;
    for (int it = 0; it < 20; ++it) {
      const double err = cum[seg] + arc(seg * du, u) - target;
      u -= err / speed(u);
      if (std::abs(err) < 1e-15) break;
    }
    double dr;
    const double r = radius(u, dr);
    p[i] = Vec2(r * std::cos(u), r * std::sin(u)) / total;
  }
  return Curve(g, std::move(p), Symmetry::Periodic);
}

Scalars periodic_curvature(const Curve& gamma) {
  const Points d2 = diff2(gamma);
  Scalars k(d2.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = d2[i].norm();
  return k;
}

VectorField periodic_tangent_field(const Curve& gamma, Scalars beta) {
  require_periodic(gamma.grid);
  const Grid& g = gamma.grid;
  const std::size_t m = g.size();
  Points nrm = diff1(gamma);
  for (auto& v : nrm) v = perp(v.normalized());
  // Remove the components of beta that would leave int beta n != 0.
  Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
  Eigen::Vector2d proj = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < m; ++i) {
    gram += nrm[i] * nrm[i].transpose();
    proj += beta[i] * nrm[i];
  }
  const Eigen::Vector2d c = gram.ldlt().solve(proj);
  for (std::size_t i = 0; i < m; ++i) beta[i] -= c.dot(nrm[i]);
  const double h = g.spacing();
  Points w(m);
  w[0] = Vec2::Zero();
  for (std::size_t i = 1; i < m; ++i) w[i] = w[i - 1] + 0.5 * h * (beta[i - 1] * nrm[i - 1] + beta[i] * nrm[i]);
  Vec2 mean = Vec2::Zero();
  for (const auto& v : w) mean += v;
  mean /= static_cast<double>(m);
  for (auto& v : w) v -= mean;
  return VectorField(g, std::move(w), Symmetry::Periodic);
}

}  // namespace whip
