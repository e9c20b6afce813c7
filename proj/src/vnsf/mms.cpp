#include "vnsf/mms.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

namespace vnsf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ModeEval {
  double tf, sx, cx, sy, cy, wx, wy;
};

ModeEval eval_mode(const Mode& m, double lx, double ly, double x, double y, double t) {
  ModeEval e{};
  e.tf = m.amp * std::exp(m.rate * t);
  e.wx = kTwoPi * m.kx / lx;
  e.wy = kTwoPi * m.ky / ly;
  e.sx = std::sin(e.wx * x + m.phx);
  e.cx = std::cos(e.wx * x + m.phx);
  e.sy = std::sin(e.wy * y + m.phy);
  e.cy = std::cos(e.wy * y + m.phy);
  return e;
}

}  // namespace

double AnalyticField::value(double x, double y, double t) const {
  double s = base;
  for (const auto& m : modes) {
    const auto e = eval_mode(m, lx, ly, x, y, t);
    s += e.tf * e.sx * e.sy;
  }
  return s;
}

double AnalyticField::dt(double x, double y, double t) const {
  double s = 0.0;
  for (const auto& m : modes) {
    const auto e = eval_mode(m, lx, ly, x, y, t);
    s += m.rate * e.tf * e.sx * e.sy;
  }
  return s;
}

std::array<double, 2> AnalyticField::grad(double x, double y, double t) const {
  std::array<double, 2> g{};
  for (const auto& m : modes) {
    const auto e = eval_mode(m, lx, ly, x, y, t);
    g[0] += e.tf * e.wx * e.cx * e.sy;
    g[1] += e.tf * e.wy * e.sx * e.cy;
  }
  return g;
}

std::array<double, 3> AnalyticField::hessian(double x, double y, double t) const {
  std::array<double, 3> h{};
  for (const auto& m : modes) {
    const auto e = eval_mode(m, lx, ly, x, y, t);
    h[0] -= e.tf * e.wx * e.wx * e.sx * e.sy;
    h[1] += e.tf * e.wx * e.wy * e.cx * e.cy;
    h[2] -= e.tf * e.wy * e.wy * e.sx * e.sy;
  }
  return h;
}

Manufactured default_manufactured(int dim, double lx, double ly) {
  require(dim == 1 || dim == 2, ErrorCode::InvalidArgument, "manufactured solution: dim must be 1 or 2");
  const double half_pi = 0.5 * std::numbers::pi;
  Manufactured ms;
  ms.dim = dim;
  auto field = [&](double base, std::vector<Mode> modes) {
    AnalyticField f;
    f.base = base;
    f.lx = lx;
    f.ly = dim == 2 ? ly : 1.0;
    for (auto& m : modes) {
      if (dim == 1) {
        m.ky = 0;
        m.phy = half_pi;
      }
      f.modes.push_back(m);
    }
    return f;
  };
  ms.r = field(2.0, {{0.3, -0.5, 1, 1, 0.0, 0.4}, {0.1, 1.0, 2, 0, 0.7, half_pi}});
  ms.u[0] = field(0.0, {{0.2, -1.0, 1, 1, 0.3, 0.0}, {0.1, 0.5, 0, 1, half_pi, 1.1}});
  ms.u[1] = dim == 2 ? field(0.0, {{0.15, -0.8, 1, 2, 1.0, 0.2}}) : field(0.0, {});
  ms.z = field(1.0, {{0.25, -0.3, 1, 1, 0.9, 0.5}, {0.1, 0.0, 0, 2, half_pi, 0.0}});
  return ms;
}

PointResidual manufactured_residual(const Manufactured& ms, const PhysParams& params, bool convection, double x,
                                    double y, double t) {
  const int d = ms.dim;
  const double r = ms.r.value(x, y, t);
  require(r > 0.0, ErrorCode::InvalidArgument, "manufactured density must stay positive");
  const auto gr = ms.r.grad(x, y, t);
  const auto hr = ms.r.hessian(x, y, t);
  const double lap_r = hr[0] + (d == 2 ? hr[2] : 0.0);

  std::array<double, 2> u{}, ut{};
  std::array<std::array<double, 2>, 2> gu{};
  std::array<std::array<double, 3>, 2> hu{};
  for (int k = 0; k < d; ++k) {
    u[k] = ms.u[k].value(x, y, t);
    ut[k] = ms.u[k].dt(x, y, t);
    gu[k] = ms.u[k].grad(x, y, t);
    hu[k] = ms.u[k].hessian(x, y, t);
  }
  double div_u = 0.0;
  for (int k = 0; k < d; ++k) div_u += gu[k][k];
  // grad div u
  std::array<double, 2> gdu{};
  gdu[0] = hu[0][0] + (d == 2 ? hu[1][1] : 0.0);
  if (d == 2) gdu[1] = hu[0][1] + hu[1][2];

  const auto gz = ms.z.grad(x, y, t);
  const auto hz = ms.z.hessian(x, y, t);
  const double lap_z = hz[0] + (d == 2 ? hz[2] : 0.0);

  PointResidual res;
  res.g = ms.r.dt(x, y, t) - params.eps * lap_r;
  if (convection) {
    for (int a = 0; a < d; ++a) res.g += u[a] * gr[a];
    res.g += r * div_u;
  }
  res.h = ms.z.dt(x, y, t) - lap_z + ms.z.value(x, y, t) - r;

  // grad of the pressure potential: psi''(r) grad r plus the artificial part.
  double dw = params.gamma * std::pow(r, params.gamma - 2.0);
  if (params.delta > 0.0) dw += params.delta * params.beta * std::pow(r, params.beta - 2.0);
  for (int k = 0; k < d; ++k) {
    const double lap_uk = hu[k][0] + (d == 2 ? hu[k][2] : 0.0);
    double f = ut[k] + dw * gr[k] - (params.mu * lap_uk + (params.lam + params.mu) * gdu[k]) / r - gz[k] +
               u[k] / params.zeta;
    if (convection) {
      for (int a = 0; a < d; ++a) f += u[a] * gu[k][a];
    }
    double transport = 0.0;
    for (int a = 0; a < d; ++a) transport += gr[a] * gu[k][a];
    // The momentum equation carries d/dt(r u) = r du/dt + u dr/dt; the mass
    // residual (and eps laplacian) reappear multiplied by u.
    res.f[k] = f;
    res.f_mom[k] = f + (u[k] * (res.g + params.eps * lap_r) + params.eps * transport) / r;
  }
  return res;
}

Forcing manufactured_forcing(const Manufactured& ms, const PhysParams& params, bool convection) {
  // rhs() queries g, h and f at the same point in turn; share one evaluation.
  struct Cache {
    double x = std::numeric_limits<double>::quiet_NaN(), y = 0.0, t = 0.0;
    PointResidual res;
  };
  auto cache = std::make_shared<Cache>();
  auto at = [ms, params, convection, cache](double x, double y, double t) -> const PointResidual& {
    if (!(cache->x == x && cache->y == y && cache->t == t)) {
      cache->res = manufactured_residual(ms, params, convection, x, y, t);
      cache->x = x;
      cache->y = y;
      cache->t = t;
    }
    return cache->res;
  };
  Forcing F;
  F.g_mass = [at](double x, double y, double t) { return at(x, y, t).g; };
  F.h_chem = [at](double x, double y, double t) { return at(x, y, t).h; };
  F.f_mom = [at](double x, double y, double t) { return at(x, y, t).f_mom; };
  return F;
}

State sample_state(const Manufactured& ms, const Grid& grid, double t) {
  require(grid.dim == ms.dim, ErrorCode::GridMismatch, "sample_state: grid and manufactured dimension differ");
  State s = constant_state(grid, 0.0, 0.0);
  s.t = t;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.x_center(i), y = grid.y_center(j);
      const std::size_t p = grid.index(i, j);
      s.rho[p] = ms.r.value(x, y, t);
      s.c[p] = ms.z.value(x, y, t);
      for (int k = 0; k < grid.dim; ++k) s.v(k, p) = ms.u[k].value(x, y, t);
    }
  }
  return s;
}

double l2_error(const State& a, const State& b) {
  require_same_grid(a.grid(), b.grid(), "l2_error");
  double s = 0.0;
  for (std::size_t p = 0; p < a.rho.size(); ++p) {
    const double dr = a.rho[p] - b.rho[p];
    const double dc = a.c[p] - b.c[p];
    s += dr * dr + dc * dc;
  }
  const auto av = a.v.values();
  const auto bv = b.v.values();
  for (std::size_t p = 0; p < av.size(); ++p) s += (av[p] - bv[p]) * (av[p] - bv[p]);
  return std::sqrt(s * a.grid().cell_volume());
}

MmsReport mms_convergence(const Manufactured& ms, const PhysParams& params, const SchemeSettings& base,
                          const std::vector<int>& levels, double t_end, double threshold) {
  require(levels.size() >= 2, ErrorCode::InvalidArgument, "mms_convergence needs at least two levels");
  MmsReport rep;
  rep.threshold = threshold;
  rep.convection = base.switches.convection;
  const Forcing forcing = manufactured_forcing(ms, params, base.switches.convection);
  rep.min_order = std::numeric_limits<double>::infinity();
  const double lx = ms.r.lx, ly = ms.r.ly;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const int n = levels[k];
    const Grid g = make_grid(ms.dim, n, ms.dim == 2 ? n : 1, lx, ms.dim == 2 ? ly : 1.0, BcKind::PeriodicAll);
    SchemeSettings st = base;
    st.t_end = t_end;
    st.snapshot_dt = 0.0;
    st.snapshot_stride = std::numeric_limits<int>::max();
    const Trajectory tr = run(sample_state(ms, g, 0.0), params, forcing, st);
    if (!tr.completed) fail(ErrorCode::Runtime, "mms run at n=" + std::to_string(n) + " failed: " + tr.diagnostic);
    MmsLevel L;
    L.n = n;
    L.h = g.hx;
    L.steps = tr.steps;
    L.error = l2_error(tr.snapshots.back(), sample_state(ms, g, tr.snapshots.back().t));
    if (k > 0) {
      const auto& prev = rep.levels.back();
      L.order = std::log(prev.error / L.error) / std::log(prev.h / L.h);
      rep.min_order = std::min(rep.min_order, L.order);
    }
    rep.levels.push_back(L);
  }
  rep.passed = std::isfinite(rep.min_order) && rep.min_order >= threshold;

  std::ostringstream os;
  os << "n,h,l2_error,order\n";
  char buf[160];
  for (const auto& L : rep.levels) {
    std::snprintf(buf, sizeof buf, "%d,%.6e,%.6e,%.4f\n", L.n, L.h, L.error, L.order);
    os << buf;
  }
  rep.table = os.str();
  return rep;
}

}  // namespace vnsf
