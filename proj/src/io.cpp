#include "whipgeo/io.hpp"

#include <cstdio>
#include <fstream>

namespace whip {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot open " + path.string() + " for writing");
  return out;
}

template <class Tag>
void write_points(const std::filesystem::path& path, const PlanarField<Tag>& f) {
  std::ofstream out = open_out(path);
  out << "s,x,y\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    out << format_real(f.grid.node(i)) << ',' << format_real(f[i].x()) << ',' << format_real(f[i].y()) << '\n';
}

}  // namespace

void write_curve_csv(const std::filesystem::path& path, const Curve& c) { write_points(path, c); }
void write_field_csv(const std::filesystem::path& path, const VectorField& f) { write_points(path, f); }

nlohmann::json curve_to_json(const Curve& c) {
  nlohmann::json j;
  j["n"] = c.grid.n();
  j["boundary"] = c.grid.periodic() ? "periodic" : "fixed_free_odd";
  std::vector<double> x, y;
  for (const Vec2& p : c.values) {
    x.push_back(p.x());
    y.push_back(p.y());
  }
  j["x"] = x;
  j["y"] = y;
  return j;
}

Curve curve_from_json(const nlohmann::json& j) {
  const std::string b = j.at("boundary").get<std::string>();
  if (b != "periodic" && b != "fixed_free_odd") fail(ErrorKind::InvalidArgument, "unknown boundary '" + b + "'");
  const Grid g = make_grid(j.at("n").get<int>(), b == "periodic" ? BoundaryKind::Periodic : BoundaryKind::FixedFreeOdd);
  const auto x = j.at("x").get<std::vector<double>>();
  const auto y = j.at("y").get<std::vector<double>>();
  if (x.size() != g.size() || y.size() != g.size()) fail(ErrorKind::GridMismatch, "node count does not match n");
  Points p(g.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = Vec2(x[i], y[i]);
  return Curve(g, std::move(p), g.periodic() ? Symmetry::Periodic : Symmetry::None);
}

void write_green_csv(const std::filesystem::path& path, const GreenMatrix& G) {
  std::ofstream out = open_out(path);
  const auto m = G.entries.rows();
  out << 's';
  for (Eigen::Index j = 0; j < m; ++j) out << ",x" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < m; ++i) {
    out << format_real(G.grid.node(static_cast<std::size_t>(i)));
    for (Eigen::Index j = 0; j < m; ++j) out << ',' << format_real(G.entries(i, j));
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const GeodesicTrajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,s,x,y,sigma\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const WhipState& st = traj.states[k];
    const Scalars* sigma = k < traj.tensions.size() ? &traj.tensions[k].sigma : nullptr;
    for (std::size_t i = 0; i < st.eta.size(); ++i)
      out << format_real(st.time) << ',' << format_real(st.eta.grid.node(i)) << ',' << format_real(st.eta[i].x())
          << ',' << format_real(st.eta[i].y()) << ',' << format_real(sigma ? (*sigma)[i] : 0.0) << '\n';
  }
}

void write_mm_trajectory_csv(const std::filesystem::path& path, const MMTrajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,s,x,y,sigma,kappa,a,b,omega\n";
  for (const MMGeodesicState& st : traj.states)
    for (std::size_t i = 0; i < st.eta.size(); ++i)
      out << format_real(st.time) << ',' << format_real(st.eta.grid.node(i)) << ',' << format_real(st.eta[i].x())
          << ',' << format_real(st.eta[i].y()) << ",0," << format_real(st.kappa[i]) << ',' << format_real(st.a[i])
          << ',' << format_real(st.b[i]) << ',' << format_real(st.omega[i]) << '\n';
}

void write_diagnostics_csv(const std::filesystem::path& path, const DiagnosticsSummary& d) {
  std::vector<std::vector<double>> rows;
  for (const StepDiagnostics& r : d.rows)
    rows.push_back({r.t, r.l2_speed, r.arc_err, r.odd_err, r.min_sigma, r.horizontality});
  write_table_csv(path, {"t", "l2_speed", "arc_err", "odd_err", "min_sigma", "horizontality"}, rows);
}

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_out(path);
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) fail(ErrorKind::InvalidArgument, "row width does not match the header");
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_real(row[j]);
    out << '\n';
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace whip
