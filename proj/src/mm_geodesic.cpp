#include <algorithm>
#include <cmath>

#include "whipgeo/metrics.hpp"

namespace whip {

double MMResiduals::worst() const { return std::max({b_s, a_s, kappa_t, transport}); }

namespace {

struct MMVars {
  Scalars kappa;
  Scalars a;
  double theta0 = 0.0;
};

struct Derived {
  Scalars b;
  Scalars omega;
  Scalars a_s;
};

Scalars product(const Scalars& x, const Scalars& y) {
  Scalars out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return out;
}

Derived derive(const MMVars& v, const Grid& g) {
  Derived d;
  d.b = cumtrapz_center(product(v.kappa, v.a), g);
  d.a_s = diff1(v.a, g);
  d.omega.resize(v.a.size());
  for (std::size_t i = 0; i < v.a.size(); ++i) d.omega[i] = d.a_s[i] + v.kappa[i] * d.b[i];
  return d;
}

MMVars velocity(const MMVars& v, const Grid& g) {
  const Derived d = derive(v, g);
  MMVars out;
  out.a.resize(v.a.size());
  for (std::size_t i = 0; i < v.a.size(); ++i) out.a[i] = 0.5 * v.kappa[i] * v.a[i] * v.a[i] + d.b[i] * d.a_s[i];
  out.a.front() = 0.0;
  out.a.back() = 0.0;
  out.kappa = diff1(d.omega, g);
  out.theta0 = d.omega[g.center()];
  return out;
}

MMVars axpy(const MMVars& x, double c, const MMVars& y) {
  MMVars out = x;
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    out.a[i] += c * y.a[i];
    out.kappa[i] += c * y.kappa[i];
  }
  out.theta0 += c * y.theta0;
  return out;
}

Curve reconstruct(const MMVars& v, const Grid& g) {
  Scalars theta = cumtrapz_center(v.kappa, g);
  for (double& th : theta) th += v.theta0;
  return theta_to_curve(AngularField(g, std::move(theta)));
}

MMGeodesicState make_state(const MMVars& v, const Grid& g, double t) {
  const Derived d = derive(v, g);
  MMGeodesicState s;
  s.kappa = v.kappa;
  s.a = v.a;
  s.b = d.b;
  s.omega = d.omega;
  s.theta0 = v.theta0;
  s.time = t;
  s.eta = reconstruct(v, g);
  return s;
}

// Velocity field a N + b T of a state, with T, N taken from the angular chart.
Points material_velocity(const MMGeodesicState& s) {
  const Grid& g = s.eta.grid;
  Scalars theta = cumtrapz_center(s.kappa, g);
  Points v(theta.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 t(std::cos(theta[i] + s.theta0), std::sin(theta[i] + s.theta0));
    v[i] = s.a[i] * perp(t) + s.b[i] * t;
  }
  return v;
}

double interior_sup(const Scalars& f) {
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

MMResiduals residuals(const MMGeodesicState& prev, const MMGeodesicState& next, double dt) {
  const Grid& g = next.eta.grid;
  const std::size_t m = next.a.size();
  MMResiduals r;
  const Scalars db = diff1(next.b, g);
  const Scalars da = diff1(next.a, g);
  const Scalars dw_prev = diff1(prev.omega, g);
  const Scalars dw_next = diff1(next.omega, g);
  const Points v_prev = material_velocity(prev);
  const Points v_next = material_velocity(next);
  Scalars e1(m), e2(m), e3(m), e4(m);
  for (std::size_t i = 0; i < m; ++i) {
    e1[i] = db[i] - next.kappa[i] * next.a[i];
    e2[i] = da[i] - (next.omega[i] - next.kappa[i] * next.b[i]);
    e3[i] = (next.kappa[i] - prev.kappa[i]) / dt - 0.5 * (dw_prev[i] + dw_next[i]);
    e4[i] = ((next.eta[i] - prev.eta[i]) / dt - 0.5 * (v_prev[i] + v_next[i])).norm();
  }
  r.b_s = interior_sup(e1);
  r.a_s = interior_sup(e2);
  r.kappa_t = interior_sup(e3);
  r.transport = sup_norm(e4);
  return r;
}

}  // namespace

MMTrajectory mm_geodesic_integrate(const Curve& gamma0, const Scalars& a0, double T, double dt, int store_every,
                                   double cfl_factor) {
  require_fixed_free(gamma0.grid);
  const Grid& g = gamma0.grid;
  if (a0.size() != g.size()) fail(ErrorKind::GridMismatch, "a0 does not match the grid");
  if (!(dt > 0.0) || !(T >= 0.0) || store_every < 1)
    fail(ErrorKind::InvalidArgument, "need dt > 0, T >= 0 and store_every >= 1");
  if (std::abs(a0.front()) > kBoundaryZero || std::abs(a0.back()) > kBoundaryZero)
    fail(ErrorKind::IncompatibleInitialData, "a0 must vanish at s = -1 and s = 1");

  const AngularField chart = curve_to_theta(gamma0);
  MMVars v;
  v.kappa = enforce_odd(diff1(chart.theta, g));
  v.a = enforce_odd(a0);
  v.theta0 = chart.theta[g.center()];

  MMTrajectory traj;
  traj.states.push_back(make_state(v, g, 0.0));
  MMGeodesicState last = traj.states.back();

  const int steps = T == 0.0 ? 0 : static_cast<int>(std::ceil(T / dt - 1e-9));
  const double h = steps > 0 ? T / steps : dt;
  try {
    for (int k = 1; k <= steps; ++k) {
      const double bmax = sup_norm(derive(v, g).b);
      if (bmax > 0.0 && h > cfl_factor * g.spacing() / bmax)
        fail(ErrorKind::CflViolation, "dt = " + std::to_string(h) + " exceeds " +
                                          std::to_string(cfl_factor * g.spacing() / bmax));
      const MMVars k1 = velocity(v, g);
      const MMVars k2 = velocity(axpy(v, 0.5 * h, k1), g);
      const MMVars k3 = velocity(axpy(v, 0.5 * h, k2), g);
      const MMVars k4 = velocity(axpy(v, h, k3), g);
      MMVars nv = axpy(v, h / 6.0, k1);
      nv = axpy(nv, h / 3.0, k2);
      nv = axpy(nv, h / 3.0, k3);
      nv = axpy(nv, h / 6.0, k4);
      nv.kappa = enforce_odd(nv.kappa);
      nv.a = enforce_odd(nv.a);
      nv.a.front() = 0.0;
      nv.a.back() = 0.0;
      v = std::move(nv);

      MMGeodesicState next = make_state(v, g, k * h);
      const MMResiduals r = residuals(last, next, h);
      traj.residuals.push_back(r);
      if (!std::isfinite(r.worst()) || r.worst() > kMMResidualBudget)
        fail(ErrorKind::ReconstructionDrift,
             "compatibility residual " + std::to_string(r.worst()) + " at t = " + std::to_string(k * h));
      if (k % store_every == 0 || k == steps) traj.states.push_back(next);
      last = std::move(next);
    }
  } catch (const WhipError& e) {
    traj.failed = true;
    traj.failure = e.kind();
    traj.failure_message = e.what();
  }
  return traj;
}

}  // namespace whip
