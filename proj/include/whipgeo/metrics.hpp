#ifndef WHIPGEO_METRICS_HPP
#define WHIPGEO_METRICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "whipgeo/charts.hpp"

namespace whip {

enum class MetricKind { L2, MichorMumford, H1dot };

std::string_view to_string(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view name);

// L2: int <u,v>. MichorMumford: int <u,N><v,N>, N the unit normal. H1dot: int <u',v'>.
double metric_inner(MetricKind kind, const Curve& gamma, const VectorField& u, const VectorField& v);

inline constexpr double kLengthTolerance = 0.01;

// eta o h^-1 with h(s) = int_0^s |eta'|, rescaled by 2/L so the output has length 2.
Curve reparametrize_unit_speed(const Curve& eta);
// beta o h^-1, beta = w - (int_0^s <w', T>) T with T = eta'/|eta'|.
VectorField dphi(const Curve& eta, const VectorField& w);
// int |eta'| <w, N>^2 + int |eta'| (int_0^s <w', eta'>/|eta'|)^2.
double modified_invariant_inner(const Curve& eta, const VectorField& w);

// (1/sqrt 2) int |gamma2 - gamma1|.
double chord_lower_bound(const Curve& gamma1, const Curve& gamma2);

// Sum over steps of sqrt(metric_inner(kind, mid, P dEta, P dEta)), mid the renormalized midpoint
// curve and P the orthogonal projection at mid. Independent of the time spacing.
double path_length(const std::vector<Curve>& path, MetricKind kind);

struct ZigzagRow {
  double freq = 0.0;
  double mm_length = 0.0;
  double l2_length = 0.0;
  double chord = 0.0;
};

struct ZigzagOptions {
  int steps = 400;
  double amplitude = 2.0;
};

// theta(t,s) = (1-t) theta1 + t theta2 + amplitude sin(pi t)(1-s^2) cos(2 pi f s).
std::vector<Curve> zigzag_path(const AngularField& theta1, const AngularField& theta2, double freq,
                               const ZigzagOptions& opts = {});
std::vector<ZigzagRow> zigzag_experiment(const AngularField& theta1, const AngularField& theta2,
                                         const std::vector<double>& freqs, const ZigzagOptions& opts = {});

struct MMGeodesicState {
  Scalars kappa;
  Scalars a;
  Scalars b;
  Scalars omega;
  double theta0 = 0.0;  // tangent angle at s = 0
  double time = 0.0;
  Curve eta;
};

struct MMResiduals {
  double b_s = 0.0;        // |b_s - kappa a|
  double a_s = 0.0;        // |a_s - (omega - kappa b)|
  double kappa_t = 0.0;    // |kappa_t - omega_s|, trapezoid in time
  double transport = 0.0;  // |eta_t - (a N + b T)|, trapezoid in time
  double worst() const;
};

struct MMTrajectory {
  std::vector<MMGeodesicState> states;
  std::vector<MMResiduals> residuals;
  bool failed = false;
  std::optional<ErrorKind> failure;
  std::string failure_message;
};

inline constexpr double kMMResidualBudget = 1e-3;
// a0(+-1) within this of zero is accepted and then pinned to exactly zero.
inline constexpr double kBoundaryZero = 1e-12;

// a_t = kappa a^2/2 + b a_s, kappa_t = omega_s, b_s = kappa a with b(0) = 0, omega = a_s + kappa b.
MMTrajectory mm_geodesic_integrate(const Curve& gamma0, const Scalars& a0, double T, double dt,
                                   int store_every = 1, double cfl_factor = 0.5);

}  // namespace whip

#endif
