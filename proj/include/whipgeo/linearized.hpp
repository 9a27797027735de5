#ifndef WHIPGEO_LINEARIZED_HPP
#define WHIPGEO_LINEARIZED_HPP

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "whipgeo/dynamics.hpp"

namespace whip {

struct JacobiState {
  VectorField xi;
  VectorField xi_t;
  Scalars phi;
  double time = 0.0;
};

struct JacobiOptions {
  double T = 1.0;
  double dt = 1e-3;
  int store_every = 1;
  double cfl_factor = 0.5;
};

struct JacobiSolution {
  std::vector<WhipState> base;
  std::vector<JacobiState> states;
};

// Co-integrates the geodesic from (gamma, w) with the exact linearization of its discrete
// right-hand side; xi(0) = 0, xi_t(0) = y. No arclength re-projection is applied.
JacobiSolution solve_jacobi(const Curve& gamma, const VectorField& w, const VectorField& y,
                            const JacobiOptions& opts = {});
// Re-integrates from the first stored state with the trajectory's step and horizon.
JacobiSolution solve_jacobi(const GeodesicTrajectory& traj, const VectorField& y);

struct ModeRecord {
  int n = 1;
  double alpha = 0.0;  // alpha^2 = omega^2 (2n+1)(n-1)
  double amplitude(double t) const;
};

ModeRecord mode_record(double omega, int n);
double rotating_rod_mode(double omega, int n, double t);
std::optional<double> conjugate_time(double omega, int n);
// omega_n = pi / sqrt((2n+1)(n-1)): alpha_n = pi, so the first conjugate time is 1.
double critical_omega(int n);

// Tangent field int_0^s P'_{2n-1}(x) gamma'(x)^perp dx; (0, P_{2n-1}) on the straight rod.
VectorField mode_seed(const Curve& gamma, int n);
// Trapezoid projection of <xi, N> onto P_{2n-1}, N the unit normal of eta at s = 0.
double mode_amplitude(const Curve& eta, const VectorField& xi, int n);
// Linear interpolation of the first sign change after t = 0.
std::optional<double> first_zero(const std::vector<double>& t, const std::vector<double>& f);

VectorField dexp_fd(const Curve& gamma, const VectorField& w, const VectorField& y, double eps = 1e-4,
                    double dt = 1e-3);

struct SingularProbe {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd singular_values;
  double min_singular = 0.0;
};
inline constexpr int kMaxProbeModes = 12;
SingularProbe min_singular_dexp(const Curve& gamma, const VectorField& w, int modes, double dt = 1e-3);

}  // namespace whip

#endif
