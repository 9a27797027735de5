#ifndef WHIPGEO_TENSION_HPP
#define WHIPGEO_TENSION_HPP

#include <optional>

#include "whipgeo/grid.hpp"

namespace whip {

struct TensionField {
  Grid grid;
  Scalars sigma;
  std::optional<double> constant_c;
};

// coeff * sigma'' - q * sigma = rhs with the 3-point Laplacian.
// FixedFreeOdd: sigma(+-1) = 0. Periodic: cyclic closure.
Scalars solve_tension_bvp(const Scalars& q, const Scalars& rhs, const Grid& g, double coeff = 1.0);
// Sup of the discrete residual over the unknown nodes.
double tension_residual(const Scalars& sigma, const Scalars& q, const Scalars& rhs, const Grid& g,
                        double coeff = 1.0);

// |D^2 eta|^2 at nodes.
Scalars curvature_sq(const Curve& eta);
// Mean of <Da, Db> over the two chords adjacent to each node (one chord at s = +-1).
Scalars chord_energy(const Points& a, const Points& b, const Grid& g);
// |eta_st|^2 at nodes, as chord_energy(eta_t, eta_t).
Scalars stretch_source(const VectorField& eta_t);

// OneSided evaluates sigma' eta' + sigma eta'' at s = +-1 and is what the dynamics use.
// Extrapolated continues the interior values quadratically, which keeps the truncation error
// smooth to the ends so centered derivatives of the result stay second order.
enum class EndpointClosure { OneSided, Extrapolated };

// Discrete (sigma eta')': midpoint flux form at interior nodes, closure at s = +-1.
Points flux_divergence(const Scalars& sigma, const Points& eta, const Grid& g,
                       EndpointClosure closure = EndpointClosure::OneSided);

TensionField solve_tension_fixed_free(const Curve& eta, const Scalars& source);
TensionField solve_tension_fixed_free(const Curve& eta, const VectorField& eta_t);

inline constexpr double kFlatCurvature = 1e-8;
TensionField solve_tension_periodic(const Curve& gamma, const Scalars& source);
TensionField solve_tension_periodic(const Curve& gamma, const VectorField& eta_t);

// Dispatches on the grid kind.
TensionField solve_tension(const Curve& eta, const VectorField& eta_t);

struct Projection {
  VectorField field;
  Scalars sigma;
};
// z - (sigma gamma')' with sigma'' - |gamma''|^2 sigma = <z', gamma'>.
Projection orthogonal_project_full(const Curve& gamma, const VectorField& z);
VectorField orthogonal_project(const Curve& gamma, const VectorField& z);

struct PeriodicPhiReport {
  Scalars phi;
  double rho = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double min_phi = 0.0;
  double max_phi = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
};
// phi'' = kappa^2 phi, phi(0) = phi(1), phi'(0) + 1 = phi'(1), from the fundamental pair.
PeriodicPhiReport periodic_phi(const Scalars& kappa, const Grid& g);

// ell^2 sigma'' - |eta_ss|^2 sigma + |eta_st|^2 = C, sigma(+-1) = 0, trapz(sigma) = 0.
TensionField solve_tension_free_length(const Curve& eta, const VectorField& eta_t, double ell);
double free_length_residual(const TensionField& t, const Curve& eta, const VectorField& eta_t, double ell);

}  // namespace whip

#endif
