#include "vnsf/relenergy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "vnsf/operators.hpp"
#include "vnsf/thermo.hpp"

namespace vnsf {

namespace {

void require_physical(const PhysParams& params, const char* where) {
  validate(params);
  require(params.eps == 0.0 && params.delta == 0.0, ErrorCode::InvalidArgument,
          std::string(where) + ": relative energy is defined for eps = delta = 0");
}

void require_positive_density(const ScalarField& r, const char* where) {
  for (std::size_t p = 0; p < r.size(); ++p) {
    if (!(r[p] > 0.0)) {
      fail(ErrorCode::InvalidArgument, std::string(where) + ": reference density must be positive (index " +
                                           std::to_string(p) + ")");
    }
  }
}

ScalarField difference(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "difference");
  ScalarField out(a.grid());
  for (std::size_t p = 0; p < a.size(); ++p) out[p] = a[p] - b[p];
  return out;
}

VectorField difference(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "difference");
  VectorField out(a.grid());
  auto o = out.values();
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t p = 0; p < o.size(); ++p) o[p] = av[p] - bv[p];
  return out;
}

// grad u_k with the no-slip parity, stored as planes [k * d + a].
std::vector<std::vector<double>> velocity_gradient(const VectorField& u) {
  const Grid& g = u.grid();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(g.dim * g.dim), std::vector<double>(g.cells(), 0.0));
  for (int k = 0; k < g.dim; ++k) {
    for (int a = 0; a < g.dim; ++a) accumulate_central(g, u.component(k), a, Parity::Odd, 1.0, out[k * g.dim + a]);
  }
  return out;
}

VectorField viscous_term(const VectorField& u, const PhysParams& params) {
  VectorField out = vector_laplacian(u);
  const VectorField gd = grad_div(u);
  auto o = out.values();
  const auto gv = gd.values();
  for (std::size_t p = 0; p < o.size(); ++p) o[p] = params.mu * o[p] + (params.lam + params.mu) * gv[p];
  return out;
}

ScalarField chem_rate(const State& s) {
  ScalarField out = laplacian(s.c);
  for (std::size_t p = 0; p < out.size(); ++p) out[p] += s.rho[p] - s.c[p];
  return out;
}

double l2_norm(std::span<const double> a, double dv) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s * dv);
}

// Derivative at t of the quadratic through (a, b, c).
std::array<double, 3> lagrange_derivative(double a, double b, double c, double t) {
  return {((t - b) + (t - c)) / ((a - b) * (a - c)), ((t - a) + (t - c)) / ((b - a) * (b - c)),
          ((t - a) + (t - b)) / ((c - a) * (c - b))};
}

}  // namespace

ReferenceState frozen_reference(const State& state) {
  const Grid& g = state.grid();
  return ReferenceState{state, ScalarField(g), VectorField(g), ScalarField(g)};
}

std::vector<ReferenceState> differentiate_snapshots(const std::vector<State>& snaps) {
  require(snaps.size() >= 3, ErrorCode::InvalidArgument, "differentiate_snapshots needs at least three snapshots");
  const std::size_t n = snaps.size();
  std::vector<ReferenceState> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : (k + 1 == n ? n - 3 : k - 1);
    const State& A = snaps[lo];
    const State& B = snaps[lo + 1];
    const State& C = snaps[lo + 2];
    require_same_grid(A.grid(), C.grid(), "differentiate_snapshots");
    const auto w = lagrange_derivative(A.t, B.t, C.t, snaps[k].t);
    ReferenceState ref = frozen_reference(snaps[k]);
    auto combine = [&](std::span<const double> a, std::span<const double> b, std::span<const double> c,
                       std::span<double> o) {
      for (std::size_t p = 0; p < o.size(); ++p) o[p] = w[0] * a[p] + w[1] * b[p] + w[2] * c[p];
    };
    combine(A.rho.values(), B.rho.values(), C.rho.values(), ref.dt_r.values());
    combine(A.v.values(), B.v.values(), C.v.values(), ref.dt_u.values());
    combine(A.c.values(), B.c.values(), C.c.values(), ref.dt_z.values());
    out.push_back(std::move(ref));
  }
  return out;
}

VectorField residual_f(const ReferenceState& ref, const PhysParams& params) {
  const State& s = ref.state;
  const Grid& g = s.grid();
  require_positive_density(s.rho, "residual_f");
  const VectorField conv = directional_derivative(s.v, s.v);
  ScalarField w(g);
  for (std::size_t p = 0; p < w.size(); ++p) w[p] = pressure_potential(s.rho[p], params);
  const VectorField gw = grad(w);
  const VectorField gz = grad(s.c);
  const VectorField visc = viscous_term(s.v, params);
  VectorField f(g);
  for (int k = 0; k < g.dim; ++k) {
    auto o = f.component(k);
    const auto dtu = ref.dt_u.component(k);
    const auto cv = conv.component(k);
    const auto gwk = gw.component(k);
    const auto gzk = gz.component(k);
    const auto vk = visc.component(k);
    const auto uk = s.v.component(k);
    for (std::size_t p = 0; p < o.size(); ++p) {
      o[p] = dtu[p] + cv[p] + gwk[p] - vk[p] / s.rho[p] - gzk[p] + uk[p] / params.zeta;
    }
  }
  return f;
}

ScalarField residual_g(const ReferenceState& ref) {
  const State& s = ref.state;
  require_positive_density(s.rho, "residual_g");
  ScalarField g = div(momentum(s), Parity::Odd);
  for (std::size_t p = 0; p < g.size(); ++p) g[p] += ref.dt_r[p];
  return g;
}

ScalarField residual_h(const ReferenceState& ref) {
  const State& s = ref.state;
  require_positive_density(s.rho, "residual_h");
  const ScalarField lap = laplacian(s.c);
  ScalarField h(s.grid());
  for (std::size_t p = 0; p < h.size(); ++p) h[p] = ref.dt_z[p] - lap[p] + s.c[p] - s.rho[p];
  return h;
}

RemainderTerms remainder_terms(const State& s, const ReferenceState& ref, const VectorField& f, const ScalarField& g,
                               const ScalarField& h, const PhysParams& params) {
  const State& R = ref.state;
  const Grid& grid = s.grid();
  require_same_grid(grid, R.grid(), "remainder_terms");
  require_positive_density(R.rho, "remainder_terms");
  const PressureLaw law(params.gamma);
  const int d = grid.dim;
  const double dv = grid.cell_volume();

  const ScalarField div_u = div(R.v, Parity::Odd);
  const ScalarField cz = difference(s.c, R.c);
  const VectorField grad_cz = grad(cz);
  const auto grad_u = velocity_gradient(R.v);
  const VectorField visc = viscous_term(R.v, params);
  const ScalarField dtc = chem_rate(s);

  RemainderTerms T{};
  for (std::size_t p = 0; p < grid.cells(); ++p) {
    const double rho = s.rho[p];
    const double r = R.rho[p];
    const double dr = rho - r;
    T[0] -= relative_pressure(std::max(rho, 0.0), r, law) * div_u[p];
    T[1] -= psi_second(r, law) * dr * g[p];
    T[2] -= h[p] * (dtc[p] - ref.dt_z[p]);
    double t3 = 0.0, t5 = 0.0, t6 = 0.0, t7 = 0.0;
    for (int k = 0; k < d; ++k) {
      const double wk = s.v(k, p) - R.v(k, p);
      t3 += grad_cz(k, p) * dr * R.v(k, p);
      for (int a = 0; a < d; ++a) t5 += wk * (s.v(a, p) - R.v(a, p)) * grad_u[k * d + a][p];
      t6 += wk * wk;
      t7 += (dr / r * visc(k, p) + rho * f(k, p)) * wk;
    }
    T[3] -= t3;
    T[4] += cz[p] * g[p];
    T[5] -= rho * t5;
    T[6] -= rho * t6 / params.zeta;
    T[7] -= t7;
  }
  for (double& x : T) x *= dv;
  return T;
}

RelativeEnergies relative_energies(const State& s, const State& ref, const PhysParams& params) {
  require_same_grid(s.grid(), ref.grid(), "relative_energies");
  require_positive_density(ref.rho, "relative_energies");
  const PressureLaw law(params.gamma);
  const Grid& g = s.grid();
  const ScalarField cz = difference(s.c, ref.c);
  const VectorField gcz = grad(cz);
  double breg = 0.0, kin = 0.0, grad2 = 0.0, cz2 = 0.0, coup = 0.0;
  for (std::size_t p = 0; p < g.cells(); ++p) {
    breg += bregman_psi(std::max(s.rho[p], 0.0), ref.rho[p], law);
    double w2 = 0.0, gc2 = 0.0;
    for (int k = 0; k < g.dim; ++k) {
      const double w = s.v(k, p) - ref.v(k, p);
      w2 += w * w;
      gc2 += gcz(k, p) * gcz(k, p);
    }
    kin += s.rho[p] * w2;
    grad2 += gc2;
    cz2 += cz[p] * cz[p];
    coup += (s.rho[p] - ref.rho[p]) * cz[p];
  }
  const double dv = g.cell_volume();
  RelativeEnergies out;
  out.coupling_rel = coup * dv;
  out.rel_E = (breg + 0.5 * kin + 0.5 * (grad2 + cz2)) * dv - out.coupling_rel;
  out.rel_H = 0.5 * (breg + kin + 0.5 * grad2 + cz2) * dv;
  return out;
}

RelEnergyLedger relative_ledger(const State& s, const ReferenceState& ref, const PhysParams& params) {
  require_physical(params, "relative_ledger");
  const Grid& grid = s.grid();
  require_same_grid(grid, ref.state.grid(), "relative_ledger");
  const VectorField f = residual_f(ref, params);
  const ScalarField g = residual_g(ref);
  const ScalarField h = residual_h(ref);

  RelEnergyLedger L;
  L.t = s.t;
  const RelativeEnergies re = relative_energies(s, ref.state, params);
  L.rel_E = re.rel_E;
  L.rel_H = re.rel_H;
  L.coupling_rel = re.coupling_rel;

  const VectorField w = difference(s.v, ref.state.v);
  double gw2 = 0.0;
  for (const auto& plane : velocity_gradient(w)) {
    for (double x : plane) gw2 += x * x;
  }
  double dw2 = 0.0;
  for (double x : div(w, Parity::Odd).values()) dw2 += x * x;
  const double dv = grid.cell_volume();
  L.rel_diss_visc = (params.mu * gw2 + (params.lam + params.mu) * dw2) * dv;
  const ScalarField dtc = chem_rate(s);
  double dtcz = 0.0;
  for (std::size_t p = 0; p < dtc.size(); ++p) {
    const double x = dtc[p] - ref.dt_z[p];
    dtcz += x * x;
  }
  L.rel_diss_dtc = dtcz * dv;

  L.terms = remainder_terms(s, ref, f, g, h, params);
  L.remainder_R = 0.0;
  for (double x : L.terms) L.remainder_R += x;
  L.f_norm = l2_norm(f.values(), dv);
  L.g_norm = l2_norm(g.values(), dv);
  L.h_norm = l2_norm(h.values(), dv);
  return L;
}

std::array<double, 5> j_term_breakdown(const State& s, const State& ref, const PhysParams& params) {
  require_physical(params, "j_term_breakdown");
  const Grid& grid = s.grid();
  require_same_grid(grid, ref.grid(), "j_term_breakdown");
  require_positive_density(ref.rho, "j_term_breakdown");
  const PressureLaw law(params.gamma);
  const int d = grid.dim;
  const ScalarField div_u = div(ref.v, Parity::Odd);
  const VectorField gcz = grad(difference(s.c, ref.c));
  const auto gu = velocity_gradient(ref.v);
  const VectorField lap_u = vector_laplacian(ref.v);
  const VectorField gd_u = grad_div(ref.v);

  std::array<double, 5> J{};
  for (std::size_t p = 0; p < grid.cells(); ++p) {
    const double dr = s.rho[p] - ref.rho[p];
    J[0] -= relative_pressure(std::max(s.rho[p], 0.0), ref.rho[p], law) * div_u[p];
    for (int k = 0; k < d; ++k) {
      const double wk = s.v(k, p) - ref.v(k, p);
      J[1] -= gcz(k, p) * dr * ref.v(k, p);
      for (int a = 0; a < d; ++a) J[2] -= s.rho[p] * wk * (s.v(a, p) - ref.v(a, p)) * gu[k * d + a][p];
      J[3] -= s.rho[p] * wk * wk / params.zeta;
      J[4] -= dr / ref.rho[p] * (params.mu * lap_u(k, p) + (params.lam + params.mu) * gd_u(k, p)) * wk;
    }
  }
  for (double& x : J) x *= grid.cell_volume();
  return J;
}

namespace {

struct IntervalDefects {
  std::vector<RelEnergyLedger> ledgers;
  std::vector<double> defects;
  double spacing = 0.0;
  double max_defect = 0.0;
};

double interval_defect(const RelEnergyLedger& a, const RelEnergyLedger& b) {
  const double ds = b.t - a.t;
  return b.rel_E - a.rel_E + ds * (a.rel_diss_visc + a.rel_diss_dtc) - ds * a.remainder_R;
}

IntervalDefects defects_at_stride(const std::vector<State>& weak, const std::vector<State>& strong, std::size_t stride,
                                  const PhysParams& params) {
  std::vector<State> w, s;
  for (std::size_t k = 0; k < weak.size(); k += stride) {
    w.push_back(weak[k]);
    s.push_back(strong[k]);
  }
  const auto refs = differentiate_snapshots(s);
  IntervalDefects out;
  for (std::size_t k = 0; k < w.size(); ++k) out.ledgers.push_back(relative_ledger(w[k], refs[k], params));
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    out.spacing = std::max(out.spacing, out.ledgers[k + 1].t - out.ledgers[k].t);
    const double D = interval_defect(out.ledgers[k], out.ledgers[k + 1]);
    out.defects.push_back(D);
    out.max_defect = std::max(out.max_defect, D);
  }
  return out;
}

}  // namespace

std::vector<double> relenergy_defects(const std::vector<State>& weak, const std::vector<ReferenceState>& refs,
                                      const PhysParams& params) {
  require(weak.size() == refs.size() && weak.size() >= 2, ErrorCode::InvalidArgument,
          "relenergy_defects: need matching weak and reference sequences of length >= 2");
  std::vector<RelEnergyLedger> ledgers;
  for (std::size_t k = 0; k < weak.size(); ++k) ledgers.push_back(relative_ledger(weak[k], refs[k], params));
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < ledgers.size(); ++k) {
    require(ledgers[k + 1].t > ledgers[k].t, ErrorCode::InvalidArgument, "relenergy_defects: times must increase");
    out.push_back(interval_defect(ledgers[k], ledgers[k + 1]));
  }
  return out;
}

RelAuditReport relenergy_audit(const Trajectory& weak, const Trajectory& strong, const PhysParams& params) {
  require_physical(params, "relenergy_audit");
  const std::size_t n = weak.snapshots.size();
  require(n >= 9, ErrorCode::InvalidArgument, "relenergy_audit needs at least nine snapshots");
  require(strong.snapshots.size() == n, ErrorCode::InvalidArgument,
          "relenergy_audit: weak and strong trajectories have different snapshot counts");
  const Grid& wg = weak.grid;
  std::vector<State> ref;
  ref.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double tw = weak.snapshots[k].t;
    const double ts = strong.snapshots[k].t;
    if (std::abs(tw - ts) > 1e-12 * std::max(1.0, std::abs(tw))) {
      std::ostringstream os;
      os.precision(17);
      os << "relenergy_audit: misaligned snapshot times at index " << k << " (" << tw << " vs " << ts << ")";
      fail(ErrorCode::InvalidArgument, os.str());
    }
    State r = strong.grid == wg ? strong.snapshots[k] : restrict_state(strong.snapshots[k], wg);
    r.t = tw;
    ref.push_back(std::move(r));
  }

  // Model the per-interval defect as C_t ds^2 + C_x ds: time discretisation
  // and quadrature in time give ds^2, the spatial inconsistency between the
  // weak grid operators and the restricted reference gives a rate times ds.
  const IntervalDefects d4 = defects_at_stride(weak.snapshots, ref, 4, params);
  const IntervalDefects d2 = defects_at_stride(weak.snapshots, ref, 2, params);
  const IntervalDefects d1 = defects_at_stride(weak.snapshots, ref, 1, params);
  const double h = d1.spacing;
  double ct = (d4.max_defect - 2.0 * d2.max_defect) / (8.0 * h * h);
  double cx = (4.0 * d2.max_defect - d4.max_defect) / (4.0 * h);
  if (ct < 0.0) {
    ct = 0.0;
    cx = std::max(d2.max_defect / (2.0 * h), d4.max_defect / (4.0 * h));
  } else if (cx < 0.0) {
    cx = 0.0;
    ct = std::max(d4.max_defect / 16.0, d2.max_defect / 4.0) / (h * h);
  }

  RelAuditReport rep;
  rep.c_time = ct;
  rep.c_space = cx;
  rep.spacing = h;
  rep.ledgers = d1.ledgers;
  rep.defects = d1.defects;
  double cum = 0.0, cum_tol = 0.0;
  rep.passed = true;
  rep.worst_ratio = 0.0;
  for (std::size_t k = 0; k < d1.defects.size(); ++k) {
    const double ds = d1.ledgers[k + 1].t - d1.ledgers[k].t;
    const double tol = ct * ds * ds + cx * ds;
    cum += d1.defects[k];
    cum_tol += tol;
    rep.times.push_back(d1.ledgers[k + 1].t);
    rep.tolerances.push_back(tol);
    rep.cumulative.push_back(cum);
    rep.cumulative_tolerances.push_back(cum_tol);
    if (d1.defects[k] > tol || cum > cum_tol) rep.passed = false;
    if (tol > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, d1.defects[k] / tol);
    else if (d1.defects[k] > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, 1e300);
  }

  std::ostringstream os;
  os.precision(6);
  os << "relative energy audit: snapshots=" << n << " ds=" << h << " max_defect(ds)=" << d1.max_defect
     << " max_defect(2ds)=" << d2.max_defect << " max_defect(4ds)=" << d4.max_defect << " C_t=" << ct
     << " C_x=" << cx << " worst defect/tolerance=" << rep.worst_ratio;
  rep.summary = os.str();
  return rep;
}

WeakStrongReport weak_strong_diagnostic(const State& fine_initial, const PhysParams& params,
                                        const SchemeSettings& settings, const std::vector<int>& coarse_levels,
                                        double required_ratio) {
  require_physical(params, "weak_strong_diagnostic");
  require(!coarse_levels.empty(), ErrorCode::InvalidArgument, "weak_strong_diagnostic needs coarse levels");
  const Grid& fg = fine_initial.grid();
  SchemeSettings st = settings;
  if (!(st.snapshot_dt > 0.0)) st.snapshot_dt = st.t_end / 10.0;
  require(st.t_end > 0.0, ErrorCode::InvalidArgument, "weak_strong_diagnostic needs t_end > 0");

  const Trajectory fine = run(fine_initial, params, {}, st);
  if (!fine.completed) fail(ErrorCode::Runtime, "fine run failed: " + fine.diagnostic);

  WeakStrongReport rep;
  rep.fine_n = fg.nx;
  rep.required_ratio = required_ratio;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (int n : coarse_levels) {
    require(n <= fg.nx && fg.nx % n == 0, ErrorCode::InvalidArgument,
            "weak_strong_diagnostic: coarse resolution must divide the fine one");
    const Grid cg = make_grid(fg.dim, n, fg.dim == 2 ? fg.ny * n / fg.nx : 1, fg.lx, fg.ly, fg.bc);
    const bool same = cg == fg;
    const State init = same ? fine_initial : restrict_state(fine_initial, cg);
    const Trajectory coarse = same ? fine : run(init, params, {}, st);
    if (!coarse.completed) fail(ErrorCode::Runtime, "coarse run n=" + std::to_string(n) + " failed: " + coarse.diagnostic);
    require(coarse.snapshots.size() == fine.snapshots.size(), ErrorCode::Runtime,
            "weak_strong_diagnostic: coarse and fine snapshot counts differ");

    WeakStrongLevel L;
    L.n = n;
    for (std::size_t k = 0; k < fine.snapshots.size(); ++k) {
      const State& cs = coarse.snapshots[k];
      const State ref = same ? fine.snapshots[k] : restrict_state(fine.snapshots[k], cg);
      const RelativeEnergies re = relative_energies(cs, ref, params);
      L.times.push_back(cs.t);
      L.rel_H.push_back(re.rel_H);
      L.rel_E.push_back(re.rel_E);
      L.sup_rel_H = std::max(L.sup_rel_H, re.rel_H);
      L.lower_bound_c = std::max(L.lower_bound_c, 0.5 * re.rel_H - re.rel_E);
    }
    // Least-squares fit of log rel_H = log A + B t over the positive samples.
    double sw = 0, st_ = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t k = 0; k < L.times.size(); ++k) {
      if (!(L.rel_H[k] > 0.0)) continue;
      const double y = std::log(L.rel_H[k]);
      sw += 1;
      st_ += L.times[k];
      sy += y;
      stt += L.times[k] * L.times[k];
      sty += L.times[k] * y;
    }
    const double det = sw * stt - st_ * st_;
    if (sw >= 2 && det > 0.0) {
      L.fit_b = (sw * sty - st_ * sy) / det;
      L.fit_a = std::exp((sy - L.fit_b * st_) / sw);
    } else {
      L.fit_a = L.sup_rel_H;
      L.fit_b = 0.0;
    }
    if (!rep.levels.empty()) {
      const double prev = rep.levels.back().sup_rel_H;
      L.ratio = L.sup_rel_H > 0.0 ? prev / L.sup_rel_H : std::numeric_limits<double>::infinity();
      rep.min_ratio = std::min(rep.min_ratio, L.ratio);
    }
    rep.levels.push_back(std::move(L));
  }
  rep.passed = rep.levels.size() >= 2 && rep.min_ratio >= required_ratio;

  std::ostringstream os;
  os << "n,sup_rel_H,ratio,fit_A,fit_B,lower_bound_C\n";
  char buf[200];
  for (const auto& L : rep.levels) {
    std::snprintf(buf, sizeof buf, "%d,%.6e,%.4f,%.6e,%.4f,%.6e\n", L.n, L.sup_rel_H, L.ratio, L.fit_a, L.fit_b,
                  L.lower_bound_c);
    os << buf;
  }
  rep.table = os.str();
  return rep;
}

}  // namespace vnsf
