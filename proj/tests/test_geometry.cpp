#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "whipgeo/geometry.hpp"
#include "whipgeo/legendre.hpp"
#include "whipgeo/presets.hpp"

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

VectorField normal_mode(const Grid& g, int k) {
  return sample<FieldTag>(g, [k](double s) { return Vec2(0.0, legendre(k, s)); });
}

VectorField combine(double a, const VectorField& x, double b, const VectorField& y) {
  VectorField out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

double rod_K(int n, int k) {
  const Grid g = odd_grid(n);
  return sectional_curvature(straight_rod(g).curve, normal_mode(g, 1), normal_mode(g, k)).K;
}

double rod_K_reference(int k) {
  return oracle::straight_rod_mode_curvature(
      [](double) { return 1.0; }, [k](double x) { return legendre_deriv(k, x); }, [](double x) { return x; },
      [k](double x) { return legendre(k, x); });
}

}  // namespace

TEST_CASE("second fundamental form on the rotating rod") {
  const Grid g = odd_grid(128);
  const ChartedCurve rod = straight_rod(g);
  const double omega = 1.7;
  const VectorField u = tangent_field(rod.theta, Scalars(g.size(), omega));
  const Scalars sig = second_fundamental_sigma(rod.curve, u, u);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.node(i);
    err = std::max(err, std::abs(sig[i] - omega * omega * (1.0 - s * s) / 2.0));
  }
  CHECK(err <= 1e-10);

  CHECK(sup_norm(second_fundamental_sigma(rod.curve, VectorField(g), u)) == 0.0);
}

TEST_CASE("second fundamental form is symmetric and bilinear") {
  const Grid g = odd_grid(96);
  Rng rng(5);
  const ChartedCurve c = random_smooth_curve(g, rng, 0.7);
  const GreenMatrix G = green_matrix(c.curve);
  const VectorField u = tangent_field(c.theta, random_even_profile(g, rng, 1.0));
  const VectorField v = tangent_field(c.theta, random_even_profile(g, rng, 1.0));
  const VectorField z = tangent_field(c.theta, random_even_profile(g, rng, 1.0));
  const Scalars uv = second_fundamental_sigma(G, u, v);
  const Scalars vu = second_fundamental_sigma(G, v, u);
  CHECK(sup_diff(uv, vu) <= 1e-14);
  const Scalars lhs = second_fundamental_sigma(G, combine(2.0, u, -3.0, z), v);
  const Scalars uz = second_fundamental_sigma(G, z, v);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(lhs[i] - (2.0 * uv[i] - 3.0 * uz[i])));
  CHECK(err <= 1e-12);
  // Nonnegative kernel and a nonnegative source give a nonnegative tension.
  for (double x : second_fundamental_sigma(G, u, u)) CHECK(x >= -1e-14);
}

TEST_CASE("straight-rod sectional curvature against quadrature") {
  const Grid g = odd_grid(256);
  const ChartedCurve rod = straight_rod(g);
  for (int k : {3, 5}) {
    const SectionReport rep = sectional_curvature(rod.curve, normal_mode(g, 1), normal_mode(g, k));
    const double ref = rod_K_reference(k);
    CHECK(std::abs(rep.K - ref) <= 100.0 * k * k / (256.0 * 256.0) * ref);
    CHECK(rep.K >= rep.lower_bound);
    CHECK(rep.rho == doctest::Approx(0.0));
    CHECK(rep.lower_bound == doctest::Approx(1.0));
  }
}

TEST_CASE("sectional curvature converges at second order") {
  for (int k : {3, 5}) {
    std::vector<double> K;
    for (int n : {128, 256, 512, 1024}) K.push_back(rod_K(n, k));
    const double ref = rod_K_reference(k);
    for (std::size_t i = 2; i < K.size(); ++i)
      CHECK(std::log2((K[i - 1] - K[i - 2]) / (K[i] - K[i - 1])) == doctest::Approx(2.0).epsilon(0.05));
    // One Richardson step removes the h^2 term.
    const double extrapolated = K[3] + (K[3] - K[2]) / 3.0;
    CHECK(std::abs(extrapolated - ref) <= 1e-6 * ref);
  }
}

TEST_CASE("parallel sections are rejected") {
  const Grid g = odd_grid(64);
  const ChartedCurve rod = straight_rod(g);
  const VectorField u = normal_mode(g, 3);
  CHECK(kind_of([&] { sectional_curvature(rod.curve, u, combine(2.0, u, 0.0, u)); }) == ErrorKind::ParallelSection);
  CHECK(kind_of([&] { sectional_curvature(rod.curve, u, VectorField(g)); }) == ErrorKind::ParallelSection);
}

TEST_CASE("curvature lower bound on random sections") {
  Rng rng(21);
  for (int n : {64, 128}) {
    const Grid g = odd_grid(n);
    for (int trial = 0; trial < 8; ++trial) {
      const ChartedCurve c = random_smooth_curve(g, rng, 0.8);
      const GreenMatrix G = green_matrix(c.curve);
      const VectorField u = tangent_field(c.theta, random_even_profile(g, rng, 1.0));
      const VectorField v = tangent_field(c.theta, random_even_profile(g, rng, 1.0));
      const SectionReport rep = sectional_curvature(G, c.curve, u, v);
      CHECK(rep.K >= rep.lower_bound);
      CHECK(rep.lower_bound_spectral == doctest::Approx(rep.lower_bound));
      CHECK(min_section_integrand(u, v) >= -1e-12);
    }
  }
}

TEST_CASE("sectional curvature depends only on the plane") {
  const Grid g = odd_grid(128);
  Rng rng(8);
  const ChartedCurve c = random_smooth_curve(g, rng, 0.6);
  const GreenMatrix G = green_matrix(c.curve);
  const VectorField u = tangent_field(c.theta, random_even_profile(g, rng, 1.0));
  const VectorField v = tangent_field(c.theta, random_even_profile(g, rng, 1.0));
  const double K = sectional_curvature(G, c.curve, u, v).K;
  for (int trial = 0; trial < 5; ++trial) {
    std::normal_distribution<double> N;
    double a = N(rng), b = N(rng), cc = N(rng), d = N(rng);
    if (std::abs(a * d - b * cc) < 0.2) d += 1.0;
    const double K2 = sectional_curvature(G, c.curve, combine(a, u, b, v), combine(cc, u, d, v)).K;
    CHECK(std::abs(K2 - K) <= 1e-6 * std::max(1.0, std::abs(K)));
  }
}

TEST_CASE("high modes make the curvature grow") {
  const std::vector<ProbeRow> rows = curvature_unboundedness_probe(odd_grid(512), 6);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].K > rows[i - 1].K);
  CHECK(kind_of([] { curvature_unboundedness_probe(odd_grid(64), 9); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("periodic curvature bound") {
  const Grid g = make_grid(256, BoundaryKind::Periodic);
  const Curve circle = unit_circle(g);
  CHECK(periodic_rho(circle) == doctest::Approx(4.0 * pi * pi).epsilon(1e-3));
  CHECK(periodic_curvature_bound(circle) == doctest::Approx(std::exp(-2.0 * pi * pi)).epsilon(1e-2));

  Rng rng(17);
  auto check_sections = [&](const Curve& gamma) {
    const Scalars kappa = periodic_curvature(gamma);
    for (int trial = 0; trial < 3; ++trial) {
      Scalars beta(g.size());
      std::normal_distribution<double> N;
      const double a1 = N(rng), a2 = N(rng), b1 = N(rng), b2 = N(rng);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = g.node(i);
        beta[i] = a1 * std::cos(2 * pi * 2 * s) + a2 * std::sin(2 * pi * 3 * s) + 0.1 * kappa[i];
      }
      const VectorField u = periodic_tangent_field(gamma, beta);
      for (std::size_t i = 0; i < g.size(); ++i) beta[i] = b1 * std::sin(2 * pi * 2 * g.node(i)) + b2 * std::cos(2 * pi * 4 * g.node(i));
      const VectorField v = periodic_tangent_field(gamma, beta);
      const SectionReport rep = sectional_curvature(gamma, u, v);
      CHECK(rep.K >= rep.lower_bound);
    }
  };
  check_sections(circle);
  for (int k = 0; k < 10; ++k) check_sections(perturbed_circle(g, rng, 0.05));

  Curve point(g);
  for (std::size_t i = 0; i < g.size(); ++i) point[i] = Vec2(0.3, -0.2);
  CHECK(kind_of([&] { periodic_rho(point); }) == ErrorKind::FlatCurve);
}
