#ifndef WHIPGEO_IO_HPP
#define WHIPGEO_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "whipgeo/dynamics.hpp"
#include "whipgeo/green.hpp"
#include "whipgeo/metrics.hpp"

namespace whip {

// Every real is written with 17 significant digits so files round-trip bit-exactly.
std::string format_real(double x);

void write_curve_csv(const std::filesystem::path& path, const Curve& c);
void write_field_csv(const std::filesystem::path& path, const VectorField& f);

nlohmann::json curve_to_json(const Curve& c);
Curve curve_from_json(const nlohmann::json& j);

void write_green_csv(const std::filesystem::path& path, const GreenMatrix& G);

// Columns t,s,x,y,sigma; one row per stored state and node.
void write_trajectory_csv(const std::filesystem::path& path, const GeodesicTrajectory& traj);
// Trajectory schema plus kappa,a,b,omega; sigma is written as 0.
void write_mm_trajectory_csv(const std::filesystem::path& path, const MMTrajectory& traj);
void write_diagnostics_csv(const std::filesystem::path& path, const DiagnosticsSummary& d);

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace whip

#endif
