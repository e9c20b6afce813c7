#include "vnsf/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vnsf/operators.hpp"

namespace vnsf {

void validate(const SchemeSettings& s) {
  require(s.cfl_adv > 0.0 && s.cfl_adv < 1.0, ErrorCode::InvalidArgument, "cfl_adv must lie in (0,1)");
  require(s.cfl_diff > 0.0 && s.cfl_diff < 1.0, ErrorCode::InvalidArgument, "cfl_diff must lie in (0,1)");
  require(s.rho_floor > 0.0, ErrorCode::InvalidArgument, "rho_floor must be positive");
  require(std::isfinite(s.t_end) && s.t_end >= 0.0, ErrorCode::InvalidArgument, "t_end must be >= 0");
  require(s.snapshot_stride >= 1, ErrorCode::InvalidArgument, "snapshot_stride must be >= 1");
  require(std::isfinite(s.snapshot_dt) && s.snapshot_dt >= 0.0, ErrorCode::InvalidArgument, "snapshot_dt must be >= 0");
}

VectorField momentum(const State& s) {
  VectorField m(s.grid());
  for (int k = 0; k < s.grid().dim; ++k) {
    auto mk = m.component(k);
    const auto vk = s.v.component(k);
    for (std::size_t p = 0; p < mk.size(); ++p) mk[p] = s.rho[p] * vk[p];
  }
  return m;
}

double pressure_potential(double rho, const PhysParams& p) {
  // Undershoots are reported by the run monitor, not repaired; the potential
  // is evaluated at the nonnegative part so a -1e-16 density does not produce
  // a NaN power.
  const double r = rho > 0.0 ? rho : 0.0;
  double w = p.gamma / (p.gamma - 1.0) * std::pow(r, p.gamma - 1.0);
  if (p.delta > 0.0) w += p.delta * p.beta / (p.beta - 1.0) * std::pow(r, p.beta - 1.0);
  return w;
}

namespace {

void check_rates(const Rates& r) {
  auto scan = [](std::span<const double> a, const char* name) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!std::isfinite(a[k])) {
        std::ostringstream os;
        os << "rhs produced a non-finite " << name << " value at index " << k;
        fail(ErrorCode::NonFinite, os.str());
      }
    }
  };
  scan(r.drho.values(), "density rate");
  scan(r.dm.values(), "momentum rate");
  scan(r.dc.values(), "chemoattractant rate");
}

}  // namespace

Rates rhs(const State& s, const PhysParams& params, const Forcing& forcing, const ModelSwitches& switches) {
  const Grid& g = s.grid();
  require_same_grid(g, s.v.grid(), "rhs(v)");
  require_same_grid(g, s.c.grid(), "rhs(c)");
  const int d = g.dim;
  const std::size_t n = g.cells();
  const VectorField m = momentum(s);

  Rates out{ScalarField(g), VectorField(g), ScalarField(g)};
  auto drho = out.drho.values();
  auto dmv = out.dm.values();

  if (switches.convection) {
    const ScalarField cs = convect_scalar(s.v, s.rho);
    const VectorField cm = convect_momentum(s.v, m);
    for (std::size_t p = 0; p < n; ++p) drho[p] -= cs[p];
    const auto cmv = cm.values();
    for (std::size_t p = 0; p < dmv.size(); ++p) dmv[p] -= cmv[p];
  }

  if (params.eps > 0.0) {
    const ScalarField lap_rho = laplacian(s.rho);
    for (std::size_t p = 0; p < n; ++p) drho[p] += params.eps * lap_rho[p];
    const VectorField grad_rho = grad(s.rho);
    const VectorField transport = directional_derivative(grad_rho, s.v);
    const auto tv = transport.values();
    for (std::size_t p = 0; p < dmv.size(); ++p) dmv[p] -= params.eps * tv[p];
  }

  // grad p(rho) + delta grad rho^beta written as rho grad w.
  ScalarField w(g);
  for (std::size_t p = 0; p < n; ++p) w[p] = pressure_potential(s.rho[p], params);
  const VectorField grad_w = grad(w);
  const VectorField grad_c = grad(s.c);
  const VectorField lap_v = vector_laplacian(s.v);
  const VectorField gd_v = grad_div(s.v);
  const double lm = params.lam + params.mu;
  for (int k = 0; k < d; ++k) {
    auto o = out.dm.component(k);
    const auto gw = grad_w.component(k);
    const auto gc = grad_c.component(k);
    const auto lv = lap_v.component(k);
    const auto gdv = gd_v.component(k);
    const auto mk = m.component(k);
    for (std::size_t p = 0; p < n; ++p) {
      o[p] += s.rho[p] * (gc[p] - gw[p]) + params.mu * lv[p] + lm * gdv[p] - mk[p] / params.zeta;
    }
  }

  const ScalarField lap_c = laplacian(s.c);
  auto dc = out.dc.values();
  for (std::size_t p = 0; p < n; ++p) dc[p] = lap_c[p] - s.c[p] + s.rho[p];

  if (!forcing.empty()) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t p = g.index(i, j);
        const double x = g.x_center(i);
        const double y = g.y_center(j);
        if (forcing.g_mass) drho[p] += forcing.g_mass(x, y, s.t);
        if (forcing.h_chem) dc[p] += forcing.h_chem(x, y, s.t);
        if (forcing.f_mom) {
          const auto f = forcing.f_mom(x, y, s.t);
          for (int k = 0; k < d; ++k) out.dm(k, p) += s.rho[p] * f[k];
        }
      }
    }
  }

  check_rates(out);
  return out;
}

double stable_dt(const State& s, const PhysParams& params, const SchemeSettings& settings) {
  const Grid& g = s.grid();
  double wave = 0.0;
  for (std::size_t p = 0; p < g.cells(); ++p) {
    const double r = std::max(s.rho[p], 0.0);
    double cs2 = params.gamma * std::pow(r, params.gamma - 1.0);
    if (params.delta > 0.0) cs2 += params.delta * params.beta * std::pow(r, params.beta - 1.0);
    const double sound = std::sqrt(cs2);
    for (int k = 0; k < g.dim; ++k) wave = std::max(wave, std::abs(s.v(k, p)) + sound);
  }
  const double h = g.h_min();
  const double nu = std::max({params.mu, params.lam + 2.0 * params.mu, 1.0, params.eps});
  const double dt_diff = settings.cfl_diff * h * h / (2.0 * g.dim * nu);
  const double dt_adv = wave > 0.0 ? settings.cfl_adv * h / wave : dt_diff;
  return std::min(dt_adv, dt_diff);
}

namespace {

// State built from conserved variables (rho, m, c) at time t.
State from_conserved(const Grid& g, double t, std::vector<double> rho, std::vector<double> m, std::vector<double> c,
                     double rho_floor) {
  State out{t, ScalarField(g, std::move(rho)), VectorField(g, std::move(m)), ScalarField(g, std::move(c))};
  const std::size_t n = g.cells();
  for (int k = 0; k < g.dim; ++k) {
    auto vk = out.v.component(k);
    for (std::size_t p = 0; p < n; ++p) vk[p] /= std::max(out.rho[p], rho_floor);
  }
  return out;
}

}  // namespace

State heun_step(const State& s, const PhysParams& params, const Forcing& forcing, const SchemeSettings& settings,
                double dt) {
  const Grid& g = s.grid();
  const VectorField m0 = momentum(s);
  const Rates k1 = rhs(s, params, forcing, settings.switches);

  auto stage = [&](std::span<const double> base, std::span<const double> rate, double h) {
    std::vector<double> out(base.size());
    for (std::size_t p = 0; p < base.size(); ++p) out[p] = base[p] + h * rate[p];
    return out;
  };
  const State mid = from_conserved(g, s.t + dt, stage(s.rho.values(), k1.drho.values(), dt),
                                   stage(m0.values(), k1.dm.values(), dt), stage(s.c.values(), k1.dc.values(), dt),
                                   settings.rho_floor);
  const Rates k2 = rhs(mid, params, forcing, settings.switches);

  auto combine = [&](std::span<const double> base, std::span<const double> r1, std::span<const double> r2) {
    std::vector<double> out(base.size());
    for (std::size_t p = 0; p < base.size(); ++p) out[p] = base[p] + 0.5 * dt * (r1[p] + r2[p]);
    return out;
  };
  return from_conserved(g, s.t + dt, combine(s.rho.values(), k1.drho.values(), k2.drho.values()),
                        combine(m0.values(), k1.dm.values(), k2.dm.values()),
                        combine(s.c.values(), k1.dc.values(), k2.dc.values()), settings.rho_floor);
}

State step(const State& s, const PhysParams& params, const Forcing& forcing, const SchemeSettings& settings) {
  const double dt = stable_dt(s, params, settings);
  if (!(dt >= 1e-12)) fail(ErrorCode::Runtime, "time step underflow: vacuum/blow-up suspected");
  return heun_step(s, params, forcing, settings, dt);
}

namespace {

double field_min(std::span<const double> a) { return a.empty() ? 0.0 : *std::min_element(a.begin(), a.end()); }

void check_state_finite(const State& s) {
  auto scan = [](std::span<const double> a, const char* name) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!std::isfinite(a[k])) fail(ErrorCode::NonFinite, std::string("non-finite ") + name + " at index " + std::to_string(k));
    }
  };
  scan(s.rho.values(), "density");
  scan(s.v.values(), "velocity");
  scan(s.c.values(), "chemoattractant");
}

}  // namespace

Trajectory run(const State& initial, const PhysParams& params, const Forcing& forcing, const SchemeSettings& settings,
               const StepObserver& observer, bool retain_snapshots) {
  validate(params);
  validate(settings);
  validate_state(initial);

  Trajectory traj;
  traj.grid = initial.grid();
  traj.params = params;
  traj.provenance = Provenance{"heun2", settings.cfl_adv, settings.cfl_diff, settings.seed};
  traj.min_rho = field_min(initial.rho.values());
  traj.min_c = field_min(initial.c.values());
  traj.append(initial);

  const double t_end = settings.t_end;
  const bool timed = settings.snapshot_dt > 0.0;
  std::size_t next_snap = 1;
  State current = initial;
  try {
    while (current.t < t_end) {
      double target = t_end;
      if (timed) {
        target = std::min(t_end, static_cast<double>(next_snap) * settings.snapshot_dt);
        // n * (t_end / n) can fall an ulp short of t_end.
        if (t_end - target <= 1e-12 * t_end) target = t_end;
      }
      const double remaining = target - current.t;
      double dt = stable_dt(current, params, settings);
      if (!(dt >= 1e-12)) fail(ErrorCode::Runtime, "time step underflow: vacuum/blow-up suspected");
      // Split the tail so the last step is never much shorter than the rest.
      bool lands = false;
      if (dt >= remaining) {
        dt = remaining;
        lands = true;
      } else if (2.0 * dt > remaining) {
        dt = 0.5 * remaining;
      }
      State next = heun_step(current, params, forcing, settings, dt);
      if (lands) next.t = target;
      check_state_finite(next);
      ++traj.steps;
      traj.min_rho = std::min(traj.min_rho, field_min(next.rho.values()));
      traj.min_c = std::min(traj.min_c, field_min(next.c.values()));
      bool keep = false;
      if (timed) {
        if (lands) {
          keep = true;
          if (target < t_end) ++next_snap;
        }
      } else {
        keep = traj.steps % static_cast<std::size_t>(settings.snapshot_stride) == 0 || next.t >= t_end;
      }
      if (observer) observer(next, dt, keep);
      current = std::move(next);
      if (keep && retain_snapshots) traj.append(current);
    }
  } catch (const Error& e) {
    traj.completed = false;
    traj.diagnostic = e.what();
  }
  if (!retain_snapshots && current.t > traj.snapshots.back().t) traj.append(current);
  return traj;
}

}  // namespace vnsf
