#ifndef WHIPGEO_DYNAMICS_HPP
#define WHIPGEO_DYNAMICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "whipgeo/charts.hpp"
#include "whipgeo/tension.hpp"

namespace whip {

struct WhipState {
  Curve eta;
  VectorField eta_t;
  double time = 0.0;
};

struct StepDiagnostics {
  double t = 0.0;
  double l2_speed = 0.0;
  double arc_err = 0.0;
  double odd_err = 0.0;
  double min_sigma = 0.0;
  double horizontality = 0.0;
};

struct GeodesicTrajectory {
  std::vector<WhipState> states;
  std::vector<TensionField> tensions;
  std::vector<StepDiagnostics> diagnostics;
  bool failed = false;
  std::optional<ErrorKind> failure;
  std::string failure_message;
};

struct IntegrateOptions {
  int project_each = 0;  // 0 disables re-projection
  int store_every = 1;
  double cfl_factor = 0.5;
  double drift_budget = 1e-2;
};

struct Acceleration {
  VectorField acc;
  TensionField tension;
};

// (sigma eta_s)_s with sigma from the tension solve matching the grid kind.
Acceleration rhs(const WhipState& state);
// cfl_factor * spacing / sqrt(max sigma + eps).
double max_stable_dt(const TensionField& t, double cfl_factor);
inline constexpr double kCflEpsilon = 1e-12;
WhipState step_rk4(const WhipState& state, double dt, double cfl_factor = 0.5);

// Re-projects eta to unit speed along its chords and projects eta_t onto the tangent space.
WhipState reproject(const WhipState& state);

GeodesicTrajectory integrate_geodesic(const Curve& gamma, const VectorField& w, double T, double dt,
                                      const IntegrateOptions& opts = {});
Curve exp_map(const Curve& gamma, const VectorField& w, double dt = 1e-3, const IntegrateOptions& opts = {});

// int <eta_t, eta_s> ds.
double horizontality(const Curve& eta, const VectorField& eta_t);
// w - c gamma' with c chosen so the horizontality integral vanishes.
VectorField horizontal_part(const Curve& gamma, const VectorField& w);
inline constexpr double kHorizontalityPrecondition = 1e-8;
GeodesicTrajectory integrate_periodic(const Curve& gamma, const VectorField& w, double T, double dt,
                                      bool quotient_translations, const IntegrateOptions& opts = {});

StepDiagnostics measure(const WhipState& state, const TensionField& tension);

struct DiagnosticsSummary {
  std::vector<StepDiagnostics> rows;
  double l2_speed_drift = 0.0;  // max relative deviation from t = 0
  double max_arc_err = 0.0;
  double max_odd_err = 0.0;
  double min_sigma = 0.0;
  double max_horizontality = 0.0;
};
DiagnosticsSummary diagnostics(const GeodesicTrajectory& traj);

}  // namespace whip

#endif
