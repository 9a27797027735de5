#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "whipgeo/dynamics.hpp"
#include "whipgeo/green.hpp"
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

VectorField rotation(const ChartedCurve& c, double omega) {
  return tangent_field(c.theta, Scalars(c.curve.grid.size(), omega));
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("green_matrix of the straight rod") {
  const Grid g = odd_grid(256);
  const GreenMatrix G = green_matrix(straight_rod(g).curve);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double s = g.node(i), x = g.node(j);
      err = std::max(err, std::abs(G.entries(i, j) - (1.0 - std::max(s, x)) * (1.0 + std::min(s, x)) / 2.0));
    }
  CHECK(err < 1e-12);
  CHECK(G.entries(g.center(), g.center()) == doctest::Approx(0.5));
}

TEST_CASE("green_matrix against a dense LU oracle") {
  for (int n : {64, 128, 256}) {
    const Grid g = odd_grid(n);
    Rng rng(n);
    // Half-circle arc: theta = pi s / 2 (even after folding), plus random smooth curves.
    std::vector<Curve> curves{curve_from_even_poly(g, {0.0, pi / 2}).curve};
    for (int k = 0; k < 3; ++k) curves.push_back(random_smooth_curve(g, rng, 1.0).curve);
    for (const Curve& c : curves) {
      const GreenMatrix G = green_matrix(c);
      CHECK(max_abs_diff(G.entries, oracle::dense_green(curvature_sq(c), g.spacing())) <= 1e-10);
      CHECK(G.symmetry_residual() <= 1e-10);
      CHECK(G.min_entry() >= -1e-12);
    }
  }
}

TEST_CASE("green_bounds_check") {
  const Grid g = odd_grid(128);
  const Curve rod = straight_rod(g).curve;
  const GreenMatrix G = green_matrix(rod);
  const GreenBoundsReport r = green_bounds_check(G, rod);
  CHECK(r.rho == 0.0);
  CHECK(r.lower_ok);
  CHECK(r.upper_ok);
  CHECK(r.literal_upper_ok);
  // The folded kernel equals min(1-|s|, 1-|x|) here, so the upper bound is attained.
  CHECK(r.upper.margin == doctest::Approx(0.0).epsilon(1e-12));
  // Unfolded, G(0,0) = 1/2 sits below (1-|s|)(1-|x|) = 1: the lower bound only holds folded.
  CHECK_FALSE(r.literal_lower_ok);
  CHECK(r.literal_lower.margin == doctest::Approx(-0.5));
  CHECK(r.literal_lower.s == 0.0);

  Rng rng(5);
  for (int k = 0; k < 5; ++k) {
    const Curve c = random_smooth_curve(g, rng, 1.0).curve;
    const GreenBoundsReport rc = green_bounds_check(green_matrix(c), c);
    CHECK(rc.upper_ok);
    CHECK(rc.lower_ok);
    CHECK(rc.upper.margin >= -kBoundRoundoff);
    CHECK(rc.lower.margin >= -kBoundRoundoff);
    CHECK(rc.rho > 0.0);
  }

  GreenMatrix bad = G;
  bad.entries(80, 90) += 1.0;
  bad.entries(90, 80) += 1.0;
  const GreenBoundsReport rb = green_bounds_check(bad, rod);
  CHECK_FALSE(rb.upper_ok);
  CHECK(rb.upper.margin < -0.5);
  const bool located = (rb.upper.s == g.node(80) && rb.upper.x == g.node(90)) ||
                       (rb.upper.s == g.node(90) && rb.upper.x == g.node(80));
  CHECK(located);
}

TEST_CASE("solve_tension_fixed_free") {
  const Grid g = odd_grid(128);
  const ChartedCurve rod = straight_rod(g);
  const double omega = 1.3;
  const TensionField t = solve_tension_fixed_free(rod.curve, rotation(rod, omega));
  CHECK(t.sigma.front() == 0.0);
  CHECK(t.sigma.back() == 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.node(i);
    CHECK(t.sigma[i] == doctest::Approx(omega * omega * (1.0 - s * s) / 2.0).epsilon(1e-12));
  }

  const TensionField zero = solve_tension_fixed_free(rod.curve, Scalars(g.size(), 0.0));
  CHECK(sup_norm(zero.sigma) == 0.0);

  const ChartedCurve wavy = sine_perturbed_rod(g, 0.4);
  Rng rng(17);
  const VectorField w = tangent_field(wavy.theta, random_even_profile(g, rng, 1.0));
  const Scalars src = stretch_source(w);
  const TensionField tw = solve_tension_fixed_free(wavy.curve, src);
  const Scalars q = curvature_sq(wavy.curve);
  Scalars rhs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rhs[i] = -src[i];
  CHECK(sup_diff(tw.sigma, oracle::dense_dirichlet(q, rhs, g.spacing())) <= 1e-9);
  CHECK(sup_diff(tw.sigma, green_matrix(wavy.curve).apply(src)) <= 1e-9);
  CHECK(tension_residual(tw.sigma, q, rhs, g) <= 1e-8);
  CHECK(*std::min_element(tw.sigma.begin(), tw.sigma.end()) >= -1e-12);
  CHECK(even_residual(tw.sigma) <= 1e-10);
}

TEST_CASE("tension positivity and evenness across the random corpus") {
  for (int n : {64, 128, 256}) {
    const Grid g = odd_grid(n);
    Rng rng(100 + n);
    for (int k = 0; k < 4; ++k) {
      const ChartedCurve c = random_smooth_curve(g, rng, 1.2);
      const VectorField w = tangent_field(c.theta, random_even_profile(g, rng, 1.5));
      const TensionField t = solve_tension_fixed_free(c.curve, w);
      CHECK(*std::min_element(t.sigma.begin(), t.sigma.end()) >= -1e-12);
      CHECK(even_residual(t.sigma) <= 1e-10);
      Scalars rhs = stretch_source(w);
      for (double& r : rhs) r = -r;
      CHECK(tension_residual(t.sigma, curvature_sq(c.curve), rhs, g) <= 1e-8);
    }
  }
}

TEST_CASE("orthogonal_project") {
  const Grid g = odd_grid(128);
  const ChartedCurve rod = straight_rod(g);
  const VectorField tangent = rotation(rod, 0.8);
  const Projection p0 = orthogonal_project_full(rod.curve, tangent);
  CHECK(sup_norm(p0.sigma) < 1e-14);
  CHECK(sup_diff(p0.field.values, tangent.values) < 1e-14);

  const Projection p = orthogonal_project_full(rod.curve, retag<FieldTag>(rod.curve));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.node(i);
    CHECK(p.sigma[i] == doctest::Approx((s * s - 1.0) / 2.0).epsilon(1e-12));
  }
  CHECK(sup_diff(p.field.values, Points(g.size(), Vec2::Zero())) < 1e-12);

  // Same data on every grid; the residual is O(h^2) with a data-dependent constant.
  std::vector<double> tang, idem;
  for (int n : {64, 128, 256}) {
    const Grid gn = odd_grid(n);
    Rng rng(5);
    const ChartedCurve c = random_smooth_curve(gn, rng, 1.0);
    const VectorField z = sample<FieldTag>(gn, [](double s) { return Vec2(0.7 * s - 0.4 * s * s * s, 0.3 * s + 0.9 * s * s * s); });
    const VectorField out = orthogonal_project(c.curve, z);
    const CompatibilityReport rep = check_compatibility(c.curve, out);
    CHECK(rep.tangency_err <= compatibility_tolerance(c.curve, out));
    tang.push_back(rep.tangency_err);
    idem.push_back(sup_diff(orthogonal_project(c.curve, out).values, out.values));
  }
  CHECK(std::log2(tang[0] / tang[1]) > 1.9);
  CHECK(std::log2(tang[1] / tang[2]) > 1.9);
  CHECK(std::log2(idem[0] / idem[1]) > 1.9);
  CHECK(std::log2(idem[1] / idem[2]) > 1.9);
}

TEST_CASE("orthogonal_project meets 10/n^2 on mild data") {
  for (int n : {64, 128, 256}) {
    const Grid gn = odd_grid(n);
    const ChartedCurve c = sine_perturbed_rod(gn, 0.2);
    const VectorField z = sample<FieldTag>(gn, [](double s) { return Vec2(0.5 * s, 0.3 * s - 0.2 * s * s * s); });
    const VectorField out = orthogonal_project(c.curve, z);
    CHECK(check_compatibility(c.curve, out).tangency_err <= 10.0 / (double(n) * n));
    CHECK(sup_diff(orthogonal_project(c.curve, out).values, out.values) <= 10.0 / (double(n) * n));
  }
}

TEST_CASE("solve_tension_periodic") {
  const Grid g = make_grid(128, BoundaryKind::Periodic);
  const Curve circle = unit_circle(g);
  const double omega = 0.9;
  const double kappa = 2.0 * pi;
  const TensionField t = solve_tension_periodic(circle, Scalars(g.size(), omega * omega * kappa * kappa));
  // The discrete curvature of the sampled circle differs from 2 pi at O(h^2).
  for (double s : t.sigma) CHECK(s == doctest::Approx(omega * omega).epsilon(1e-3));

  const Scalars q = curvature_sq(circle);
  Rng rng(2);
  Scalars src(g.size());
  std::normal_distribution<double> nd;
  for (double& v : src) v = nd(rng);
  const TensionField tr = solve_tension_periodic(circle, src);
  Scalars rhs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rhs[i] = -src[i];
  CHECK(tension_residual(tr.sigma, q, rhs, g) <= 1e-9);
  CHECK(sup_diff(tr.sigma, oracle::dense_periodic(q, rhs, g.spacing())) <= 1e-9);

  CHECK(sup_norm(solve_tension_periodic(circle, Scalars(g.size(), 0.0)).sigma) == 0.0);

  const Curve flat = sample<CurveTag>(g, [](double s) { return Vec2(s, 0.0); });
  Curve line = flat;
  for (std::size_t i = 0; i < g.size(); ++i) line[i] = Vec2(0.3, -0.2);
  CHECK(kind_of([&] { solve_tension_periodic(line, src); }) == ErrorKind::FlatCurve);
}

TEST_CASE("periodic tension solution is unique") {
  const Grid g = make_grid(64, BoundaryKind::Periodic);
  Rng rng(9);
  const Curve c = perturbed_circle(g, rng, 0.1);
  const Scalars q = curvature_sq(c);
  Scalars src(g.size(), 1.0);
  Scalars rhs(g.size(), -1.0);
  const TensionField t = solve_tension_periodic(c, src);
  const double base = tension_residual(t.sigma, q, rhs, g);
  // The constant vector is the only candidate null direction of the undamped operator.
  Scalars shifted = t.sigma;
  for (double& v : shifted) v += 1e-3;
  CHECK(tension_residual(shifted, q, rhs, g) > base + 1e-3 * 0.5 * *std::min_element(q.begin(), q.end()));
}

TEST_CASE("periodic_phi") {
  const Grid g = make_grid(512, BoundaryKind::Periodic);
  const Scalars kappa(g.size(), 2.0 * pi);
  const PeriodicPhiReport r = periodic_phi(kappa, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.node(i);
    CHECK(r.phi[i] == doctest::Approx(std::cosh(2.0 * pi * (s - 0.5)) / (4.0 * pi * std::sinh(pi))).epsilon(1e-4));
  }
  CHECK(r.upper_bound == doctest::Approx(1.0 + 1.0 / (4.0 * pi * pi)));
  CHECK(r.upper_bound == doctest::Approx(1.02533).epsilon(1e-5));
  CHECK(r.rho == doctest::Approx(4.0 * pi * pi).epsilon(1e-12));
  CHECK(r.lower_bound == doctest::Approx(std::exp(-2.0 * pi * pi) / (4.0 * pi * pi)));
  CHECK(r.upper_ok);
  CHECK(r.lower_ok);

  CHECK(kind_of([&] { periodic_phi(Scalars(g.size(), 0.0), g); }) == ErrorKind::FlatCurve);

  Rng rng(4);
  for (int k = 0; k < 5; ++k) {
    const Curve c = perturbed_circle(g, rng, 0.2);
    const PeriodicPhiReport rc = periodic_phi(periodic_curvature(c), g);
    CHECK(rc.lower_ok);
    CHECK(rc.upper_ok);
  }
}

TEST_CASE("solve_tension_free_length") {
  const Grid g = odd_grid(128);
  const double ell = 1.7, omega = 0.6;
  const ChartedCurve rod = straight_rod(g);
  Curve eta = rod.curve;
  for (Vec2& p : eta.values) p *= ell;
  VectorField w = tangent_field(rod.theta, Scalars(g.size(), ell * omega));

  const TensionField t = solve_tension_free_length(eta, w, ell);
  CHECK(sup_norm(t.sigma) <= 1e-8);
  REQUIRE(t.constant_c.has_value());
  CHECK(*t.constant_c == doctest::Approx(ell * ell * omega * omega).epsilon(1e-6));

  const TensionField still = solve_tension_free_length(eta, VectorField(g), ell);
  CHECK(sup_norm(still.sigma) == 0.0);
  CHECK(*still.constant_c == 0.0);

  const ChartedCurve wavy = sine_perturbed_rod(g, 0.5);
  Rng rng(21);
  Curve eta2 = wavy.curve;
  for (Vec2& p : eta2.values) p *= ell;
  const VectorField w2 = tangent_field(wavy.theta, random_even_profile(g, rng, 1.0));
  const TensionField t2 = solve_tension_free_length(eta2, w2, ell);
  CHECK(free_length_residual(t2, eta2, w2, ell) <= 1e-8);
  CHECK(t2.sigma.front() == 0.0);
  CHECK(t2.sigma.back() == 0.0);
  CHECK(std::abs(trapz(t2.sigma, g)) <= 1e-10);
}

// Finite-difference oracle: march eta(t) = eta + t w + t^2/2 (sigma eta_s)_s and difference the
// mean squared chord speed, which is ell(t)^2 up to O(h^2).
TEST_CASE("free-length constant matches d^2(ell^2)/dt^2 = 2C") {
  std::vector<double> errs;
  for (int n : {128, 256}) {
    const Grid g = odd_grid(n);
    const ChartedCurve wavy = sine_perturbed_rod(g, 0.3);
    const double ell = 1.2;
    Rng rng(8);
    Curve eta = wavy.curve;
    for (Vec2& p : eta.values) p *= ell;
    const VectorField w = tangent_field(wavy.theta, random_even_profile(g, rng, 1.0));
    const TensionField t = solve_tension_free_length(eta, w, ell);
    const Points acc = flux_divergence(t.sigma, eta.values, g);
    auto ell_sq = [&](double tau) {
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        auto at = [&](std::size_t k) { return Vec2(eta[k] + tau * w[k] + 0.5 * tau * tau * acc[k]); };
        sum += (at(i + 1) - at(i)).squaredNorm() / (g.spacing() * g.spacing());
      }
      return sum / double(g.n());
    };
    const double d = 1e-3;
    const double d2 = (ell_sq(d) - 2.0 * ell_sq(0.0) + ell_sq(-d)) / (d * d);
    errs.push_back(std::abs(d2 - 2.0 * *t.constant_c) / (2.0 * *t.constant_c));
  }
  CHECK(errs[0] < 1e-2);
  CHECK(errs[1] < errs[0]);
}
