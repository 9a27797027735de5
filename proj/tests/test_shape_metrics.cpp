#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "whipgeo/metrics.hpp"
#include "whipgeo/presets.hpp"
#include "whipgeo/tension.hpp"

using namespace whip;
using std::numbers::pi;

namespace {

Grid odd_grid(int n) { return make_grid(n, BoundaryKind::FixedFreeOdd); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const WhipError& e) {
    return e.kind();
  }
  FAIL("expected a WhipError");
  return ErrorKind::InvalidArgument;
}

VectorField combine(double a, const VectorField& x, double b, const VectorField& y) {
  VectorField out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

Curve rotated_rod(const Grid& g, double angle) {
  return sample<CurveTag>(g, [angle](double s) { return Vec2(s * std::cos(angle), s * std::sin(angle)); });
}

// An odd increasing diffeomorphism of [-1,1].
double warp(double s) { return s + 0.3 * s * (1.0 - s * s); }

double theta_fn(double s) { return 0.4 * s * s - 0.2 * s * s * s * s; }

Curve analytic_curve(const Grid& g, const std::function<double(double)>& param) {
  return sample<CurveTag>(g, [&](double s) { return oracle::angle_curve(theta_fn, param(s)); });
}

Scalars mm_profile(const Grid& g, double A) {
  return sample_scalar(g, [A](double s) { return A * s * std::pow(1.0 - s * s, 4); });
}

}  // namespace

TEST_CASE("metric inner products on the straight rod") {
  const Grid g = odd_grid(256);
  const Curve rod = straight_rod(g).curve;
  const VectorField u = sample<FieldTag>(g, [](double s) { return Vec2(0.0, s); });
  const double h2 = 4.0 / (256.0 * 256.0);
  CHECK(metric_inner(MetricKind::L2, rod, u, u) == doctest::Approx(2.0 / 3.0).epsilon(h2));
  CHECK(metric_inner(MetricKind::MichorMumford, rod, u, u) == doctest::Approx(2.0 / 3.0).epsilon(h2));
  CHECK(metric_inner(MetricKind::H1dot, rod, u, u) == doctest::Approx(2.0).epsilon(1e-12));

  // Purely tangential motion is invisible to the normal metric.
  const VectorField along = sample<FieldTag>(g, [](double s) { return Vec2(s * s * s, 0.0); });
  CHECK(std::abs(metric_inner(MetricKind::MichorMumford, rod, along, along)) <= 1e-15);
  CHECK(metric_inner(MetricKind::L2, rod, along, along) > 0.1);

  CHECK(parse_metric(to_string(MetricKind::MichorMumford)) == MetricKind::MichorMumford);
  CHECK_FALSE(parse_metric("sobolev").has_value());
}

TEST_CASE("metric inner products are symmetric bilinear and ordered") {
  const Grid g = odd_grid(128);
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const ChartedCurve c = random_smooth_curve(g, rng, 0.7);
    const VectorField u = tangent_field(c.theta, random_even_profile(g, rng, 1.0));
    const VectorField v = tangent_field(c.theta, random_even_profile(g, rng, 1.0));
    const VectorField z = tangent_field(c.theta, random_even_profile(g, rng, 1.0));
    for (MetricKind k : {MetricKind::L2, MetricKind::MichorMumford, MetricKind::H1dot}) {
      const double uv = metric_inner(k, c.curve, u, v);
      CHECK(uv == doctest::Approx(metric_inner(k, c.curve, v, u)).epsilon(1e-13));
      const double lhs = metric_inner(k, c.curve, combine(1.5, u, -0.5, z), v);
      CHECK(lhs == doctest::Approx(1.5 * uv - 0.5 * metric_inner(k, c.curve, z, v)).epsilon(1e-12));
    }
    CHECK(metric_inner(MetricKind::MichorMumford, c.curve, u, u) <= metric_inner(MetricKind::L2, c.curve, u, u));
  }
}

TEST_CASE("unit-speed reparametrization") {
  for (int n : {64, 128, 256}) {
    const Grid g = odd_grid(n);
    const double tol = 10.0 / (double(n) * n);

    const Curve cubic = sample<CurveTag>(g, [](double s) { return Vec2((s + s * s * s) / 2.0, 0.0); });
    const Curve flat = reparametrize_unit_speed(cubic);
    CHECK(sup_diff(flat.values, straight_rod(g).curve.values) <= tol);

    const Curve unit = analytic_curve(g, [](double s) { return s; });
    CHECK(sup_diff(reparametrize_unit_speed(unit).values, unit.values) <= tol);

    const Curve warped = analytic_curve(g, warp);
    const Curve back = reparametrize_unit_speed(warped);
    CHECK(sup_diff(back.values, unit.values) <= tol);
    CHECK(sup_diff(reparametrize_unit_speed(back).values, back.values) <= tol);
  }
  const Grid g = odd_grid(64);
  const Curve long_rod = sample<CurveTag>(g, [](double s) { return Vec2(1.1 * s, 0.0); });
  CHECK(kind_of([&] { reparametrize_unit_speed(long_rod); }) == ErrorKind::LengthMismatch);
}

TEST_CASE("dphi annihilates reparametrization directions") {
  const Grid g = odd_grid(128);
  Rng rng(2);
  const ChartedCurve c = random_smooth_curve(g, rng, 0.6);
  const Points t = diff1(c.curve);
  VectorField w(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.node(i);
    w[i] = (s - s * s * s + 0.5 * std::sin(pi * s)) * t[i];
  }
  const VectorField d = dphi(c.curve, w);
  CHECK(sup_norm(squared_norms(d.values)) <= 1e-8);

  // A normal field on a unit-speed curve passes through up to the tangential correction.
  const VectorField normal = tangent_field(c.theta, Scalars(g.size(), 1.0));
  const VectorField dn = dphi(c.curve, normal);
  CHECK(std::sqrt(sup_norm(squared_norms(dn.values))) > 0.1);
}

TEST_CASE("modified invariant metric is reparametrization invariant") {
  std::vector<double> defect;
  for (int n : {128, 256, 512}) {
    const Grid g = odd_grid(n);
    auto field = [](const std::function<double(double)>& param) {
      return [param](double s) {
        const double x = param(s);
        return Vec2(std::sin(x) * x, x * x * x - 0.5 * x);
      };
    };
    const Curve unit = analytic_curve(g, [](double s) { return s; });
    const Curve warped = analytic_curve(g, warp);
    const VectorField w = sample<FieldTag>(g, field([](double s) { return s; }));
    const VectorField ww = sample<FieldTag>(g, field(warp));
    const double a = modified_invariant_inner(unit, w);
    const double b = modified_invariant_inner(warped, ww);
    defect.push_back(std::abs(a - b) / a);
    // The warp has |warp''| ~ 1.8, which sets the constant.
    CHECK(defect.back() <= 20.0 / (double(n) * n));
  }
  CHECK(std::log2(defect[0] / defect[1]) >= 1.9);
  CHECK(std::log2(defect[1] / defect[2]) >= 1.9);
}

TEST_CASE("chord lower bound and path length") {
  const Grid g = odd_grid(128);
  const Curve rod = straight_rod(g).curve;
  CHECK(chord_lower_bound(rod, rotated_rod(g, pi / 2.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(chord_lower_bound(rod, rod) == 0.0);
  CHECK(path_length({rod, rod, rod}, MetricKind::L2) == 0.0);
  CHECK(kind_of([&] { path_length({rod}, MetricKind::L2); }) == ErrorKind::InvalidArgument);

  const double omega = 0.8;
  for (int steps : {50, 200}) {
    std::vector<Curve> path;
    for (int k = 0; k <= steps; ++k) path.push_back(rotated_rod(g, omega * k / steps));
    const double l2 = path_length(path, MetricKind::L2);
    const double mm = path_length(path, MetricKind::MichorMumford);
    CHECK(l2 == doctest::Approx(omega * std::sqrt(2.0 / 3.0)).epsilon(1e-3));
    CHECK(mm <= l2 + 1e-12);
    CHECK(l2 >= chord_lower_bound(path.front(), path.back()) - 1e-12);
  }
}

TEST_CASE("zig-zag paths shrink in the normal metric") {
  const Grid g = odd_grid(128);
  const AngularField t1(g, Scalars(g.size(), 0.0));
  const AngularField t2(g, Scalars(g.size(), pi / 2.0));
  const std::vector<ZigzagRow> rows = zigzag_experiment(t1, t2, {1, 2, 4, 8}, {.steps = 200, .amplitude = 2.0});
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].mm_length < rows[i - 1].mm_length);
  for (const ZigzagRow& r : rows) {
    CHECK(r.chord == doctest::Approx(1.0));
    CHECK(r.l2_length >= r.chord - 1e-3);
    CHECK(r.mm_length <= r.l2_length);
  }
}

TEST_CASE("MM geodesic: stationary and boundary data") {
  const Grid g = odd_grid(128);
  const Curve rod = straight_rod(g).curve;
  const MMTrajectory still = mm_geodesic_integrate(rod, Scalars(g.size(), 0.0), 0.5, 1e-3);
  REQUIRE_FALSE(still.failed);
  CHECK(sup_diff(still.states.back().eta.values, rod.values) <= 1e-14);
  CHECK(sup_norm(still.states.back().kappa) == 0.0);

  Scalars bad = mm_profile(g, 0.5);
  bad.back() = 1e-6;
  bad.front() = -1e-6;
  CHECK(kind_of([&] { mm_geodesic_integrate(rod, bad, 0.1, 1e-3); }) == ErrorKind::IncompatibleInitialData);
  CHECK(kind_of([&] { mm_geodesic_integrate(rod, bad, 0.1, 0.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("MM geodesic: short-time Taylor expansion") {
  const Grid g = odd_grid(256);
  const Curve rod = straight_rod(g).curve;
  const Scalars a0 = mm_profile(g, 0.5);
  const Scalars a_ss = diff1(diff1(a0, g), g);
  std::vector<double> err;
  for (double t : {0.02, 0.01}) {
    const MMTrajectory tr = mm_geodesic_integrate(rod, a0, t, 1e-3);
    REQUIRE_FALSE(tr.failed);
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(tr.states.back().kappa[i] - t * a_ss[i]));
    err.push_back(e);
  }
  // On the rod a_t and b vanish at t = 0, so kappa_tt(0) = 0 and the defect is third order.
  CHECK(err[0] / err[1] == doctest::Approx(8.0).epsilon(0.1));
  CHECK(err[1] <= 1e-2 * 0.01 * sup_norm(a_ss) + 1e-12);
}

TEST_CASE("MM geodesic: residuals, boundaries and self-convergence") {
  std::vector<MMGeodesicState> finals;
  for (int n : {128, 256, 512}) {
    const Grid g = odd_grid(n);
    const MMTrajectory tr = mm_geodesic_integrate(straight_rod(g).curve, mm_profile(g, 0.5), 0.5, 5e-4, 50);
    REQUIRE_FALSE(tr.failed);
    for (const MMResiduals& r : tr.residuals) CHECK(r.worst() <= kMMResidualBudget);
    for (const MMGeodesicState& s : tr.states) {
      CHECK(s.a.front() == 0.0);
      CHECK(s.a.back() == 0.0);
    }
    finals.push_back(tr.states.back());
  }
  // Interior curvature and the curve itself are second order; the end node of kappa carries
  // the one-sided closure of omega_s and converges at first order.
  auto coarse_diff = [](const Scalars& coarse, const Scalars& fine, bool interior) {
    double e = 0.0;
    const std::size_t lo = interior ? coarse.size() / 10 : 0, hi = interior ? coarse.size() - lo : coarse.size();
    for (std::size_t i = lo; i < hi; ++i) e = std::max(e, std::abs(coarse[i] - fine[2 * i]));
    return e;
  };
  const double e1 = coarse_diff(finals[0].kappa, finals[1].kappa, true);
  const double e2 = coarse_diff(finals[1].kappa, finals[2].kappa, true);
  CHECK(std::log2(e1 / e2) >= 1.9);
  CHECK(coarse_diff(finals[1].kappa, finals[2].kappa, false) < 0.6 * coarse_diff(finals[0].kappa, finals[1].kappa, false));
  CHECK(std::log2(coarse_diff(finals[0].a, finals[1].a, false) / coarse_diff(finals[1].a, finals[2].a, false)) >= 1.9);
  double p1 = 0.0, p2 = 0.0;
  for (std::size_t i = 0; i < finals[0].eta.size(); ++i) {
    p1 = std::max(p1, (finals[0].eta[i] - finals[1].eta[2 * i]).norm());
    p2 = std::max(p2, (finals[1].eta[2 * i] - finals[2].eta[4 * i]).norm());
  }
  CHECK(std::log2(p1 / p2) >= 1.9);
}
