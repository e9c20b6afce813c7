#include "vnsf/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "vnsf/operators.hpp"

namespace vnsf {

namespace {

double sum_squares(const VectorField& u) {
  double s = 0.0;
  for (double x : u.values()) s += x * x;
  return s;
}

double sum_squares(const ScalarField& u) {
  double s = 0.0;
  for (double x : u.values()) s += x * x;
  return s;
}

ScalarField pointwise_power(const ScalarField& rho, double exponent) {
  ScalarField out(rho.grid());
  for (std::size_t p = 0; p < rho.size(); ++p) out[p] = std::pow(std::max(rho[p], 0.0), exponent);
  return out;
}

}  // namespace

EnergyLedger energy_ledger(const State& s, const PhysParams& params) {
  validate(params);
  const Grid& g = s.grid();
  require_same_grid(g, s.v.grid(), "energy_ledger(v)");
  require_same_grid(g, s.c.grid(), "energy_ledger(c)");
  const double dv = g.cell_volume();
  const std::size_t n = g.cells();
  const double gam = params.gamma;

  const VectorField grad_c = grad(s.c);
  const ScalarField lap_c = laplacian(s.c);

  double kinetic = 0, internal = 0, grad_c2 = 0, c2 = 0, coupling = 0, drag = 0, dtc = 0;
  double mass = 0, c_l1 = 0, rho_g = 0, rho_sq = 0, art = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const double r = s.rho[p];
    const double rp = std::max(r, 0.0);
    double v2 = 0.0;
    for (int k = 0; k < g.dim; ++k) v2 += s.v(k, p) * s.v(k, p);
    double gc2 = 0.0;
    for (int k = 0; k < g.dim; ++k) gc2 += grad_c(k, p) * grad_c(k, p);
    const double rg = std::pow(rp, gam);
    kinetic += 0.5 * r * v2;
    internal += rg / (gam - 1.0);
    grad_c2 += gc2;
    c2 += s.c[p] * s.c[p];
    coupling += r * s.c[p];
    drag += r * v2;
    const double dtc_p = lap_c[p] - s.c[p] + r;
    dtc += dtc_p * dtc_p;
    mass += r;
    c_l1 += s.c[p];
    rho_g += rg;
    rho_sq += r * r;
    if (params.delta > 0.0) art += std::pow(rp, params.beta);
  }

  EnergyLedger L;
  L.t = s.t;
  L.kinetic = kinetic * dv;
  L.internal = internal * dv;
  L.chem_h1 = 0.5 * (grad_c2 + c2) * dv;
  L.coupling = coupling * dv;
  L.E = L.internal + L.kinetic + L.chem_h1 - L.coupling;
  L.H = 0.5 * L.internal + L.kinetic + 0.25 * grad_c2 * dv + 0.5 * c2 * dv;
  L.diss_drag = drag * dv / params.zeta;
  L.diss_dtc = dtc * dv;
  L.mass = mass * dv;
  L.c_l1 = c_l1 * dv;
  L.rho_gamma = rho_g * dv;
  L.rho_square = rho_sq * dv;

  double grad_v2 = 0.0;
  for (int k = 0; k < g.dim; ++k) {
    VectorField gvk(g);
    for (int a = 0; a < g.dim; ++a) accumulate_central(g, s.v.component(k), a, Parity::Odd, 1.0, gvk.component(a));
    grad_v2 += sum_squares(gvk);
  }
  const ScalarField div_v = div(s.v, Parity::Odd);
  L.diss_visc = (params.mu * grad_v2 + (params.lam + params.mu) * sum_squares(div_v)) * dv;

  if (params.eps > 0.0) {
    L.diss_eps_gamma = 4.0 * params.eps / gam * sum_squares(grad(pointwise_power(s.rho, 0.5 * gam))) * dv;
    if (params.delta > 0.0) {
      L.diss_delta = 4.0 * params.delta * params.eps / params.beta *
                     sum_squares(grad(pointwise_power(s.rho, 0.5 * params.beta))) * dv;
    }
  }
  if (params.delta > 0.0) L.art_pressure_energy = params.delta / (params.beta - 1.0) * art * dv;
  return L;
}

std::string energy_csv_header() {
  return "t,E,H,kinetic,internal,chem_h1,coupling,diss_visc,diss_dtc,diss_drag,diss_eps_gamma,diss_delta,mass,c_l1";
}

std::string energy_csv_row(const EnergyLedger& L) {
  const double cols[] = {L.t,         L.E,        L.H,         L.kinetic,        L.internal,
                         L.chem_h1,   L.coupling, L.diss_visc, L.diss_dtc,       L.diss_drag,
                         L.diss_eps_gamma, L.diss_delta, L.mass, L.c_l1};
  std::string row;
  char buf[40];
  for (std::size_t k = 0; k < std::size(cols); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", cols[k]);
    if (k) row += ',';
    row += buf;
  }
  return row;
}

EnergyAuditReport energy_audit(std::span<const EnergyLedger> ledgers, const PhysParams& params) {
  require(ledgers.size() >= 2, ErrorCode::InvalidArgument, "energy_audit needs at least two snapshots");
  EnergyAuditReport rep;
  const bool lemma = params.eps > 0.0;
  rep.lemma_form = lemma;
  auto energy = [](const EnergyLedger& L) { return L.E + L.art_pressure_energy; };
  auto scale = [](const EnergyLedger& L) {
    return L.internal + L.kinetic + L.chem_h1 + std::abs(L.coupling) + L.art_pressure_energy;
  };

  if (lemma) {
    for (const auto& L : ledgers) rep.slack_constant = std::max(rep.slack_constant, 2.0 * (L.rho_square - L.rho_gamma));
  }

  double accumulated_slack = 0.0;
  double rounding_total = 0.0;
  rep.c_fit = 0.0;
  rep.max_defect = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n + 1 < ledgers.size(); ++n) {
    const EnergyLedger& a = ledgers[n];
    const EnergyLedger& b = ledgers[n + 1];
    const double dt = b.t - a.t;
    require(dt > 0.0, ErrorCode::InvalidArgument, "energy_audit: ledger times must increase");
    double slack = 0.0;
    if (lemma) {
      slack = dt * (0.25 * params.eps * a.diss_dtc + 2.0 * params.eps * a.rho_gamma + rep.slack_constant * params.eps);
    }
    const double defect = energy(b) - energy(a) + dt * a.total_dissipation() - slack;
    const double rounding = 1e-13 * (scale(a) + scale(b) + dt * a.total_dissipation());
    rep.defects.push_back(defect);
    rep.dts.push_back(dt);
    rep.max_defect = std::max(rep.max_defect, defect);
    rep.c_fit = std::max(rep.c_fit, std::max(0.0, defect - rounding) / (dt * dt));
    accumulated_slack += slack;
    rounding_total = std::max(rounding_total, rounding);
  }
  rep.e_initial = energy(ledgers.front());
  rep.e_final = energy(ledgers.back());
  const bool monotone = rep.e_final <= rep.e_initial + accumulated_slack + rounding_total;
  rep.passed = std::isfinite(rep.c_fit) && monotone;

  std::ostringstream os;
  os.precision(6);
  os << (lemma ? "regularised-form" : "plain") << " energy audit: intervals=" << rep.defects.size()
     << " max_defect=" << rep.max_defect << " C_fit=" << rep.c_fit << " E0=" << rep.e_initial
     << " E_end=" << rep.e_final;
  if (lemma) os << " slack_C=" << rep.slack_constant;
  rep.summary = os.str();
  return rep;
}

EnergyAuditReport energy_audit(const Trajectory& traj, const PhysParams& params) {
  std::vector<EnergyLedger> ledgers;
  ledgers.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) {
    require_same_grid(traj.grid, s.grid(), "energy_audit");
    ledgers.push_back(energy_ledger(s, params));
  }
  return energy_audit(ledgers, params);
}

SugiyamaReport sugiyama_audit(const ScalarField& rho, const ScalarField& c, double m, int d, double kappa, double xi) {
  require_same_grid(rho.grid(), c.grid(), "sugiyama_audit");
  require(kappa > 0.0 && xi > 0.0, ErrorCode::InvalidArgument, "sugiyama_audit: kappa and xi must be positive");
  const SugiyamaExponents ex = sugiyama_exponents(m, d);
  const Grid& g = rho.grid();
  const double dv = g.cell_volume();
  double lhs = 0, rho_m = 0, c_l1 = 0;
  for (std::size_t p = 0; p < rho.size(); ++p) {
    require(rho[p] >= 0.0 && c[p] >= 0.0, ErrorCode::InvalidArgument, "sugiyama_audit: fields must be nonnegative");
    lhs += rho[p] * c[p];
    rho_m += std::pow(rho[p], m);
    c_l1 += c[p];
  }
  SugiyamaReport r;
  r.lhs = lhs * dv;
  r.rho_term = kappa * rho_m * dv;
  r.grad_term = xi * sum_squares(grad(c)) * dv;
  r.c_l1 = c_l1 * dv;
  r.c2 = ex.c2;
  const double excess = r.lhs - r.rho_term - r.grad_term;
  if (r.c_l1 == 0.0) {
    if (excess > 0.0) fail(ErrorCode::Runtime, "sugiyama_audit: degenerate denominator (c = 0 with positive excess)");
    r.required_c1 = 0.0;
  } else {
    r.required_c1 = std::max(0.0, excess / std::pow(r.c_l1, ex.c2));
  }
  return r;
}

std::pair<ScalarField, ScalarField> random_smooth_pair(const Grid& grid, std::uint64_t seed, int modes, double amplitude) {
  require(modes >= 1, ErrorCode::InvalidArgument, "random_smooth_pair: need at least one mode");
  require(std::isfinite(amplitude) && amplitude >= 0.0, ErrorCode::InvalidArgument,
          "random_smooth_pair: amplitude must be finite and nonnegative");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Mode {
    int kx, ky;
    double amp, phase;
  };
  auto draw_modes = [&]() {
    std::vector<Mode> ms;
    for (int q = 0; q < modes; ++q) {
      Mode md{};
      do {
        md.kx = static_cast<int>(unit(gen) * (modes + 1)) % (modes + 1);
        md.ky = grid.dim == 2 ? static_cast<int>(unit(gen) * (modes + 1)) % (modes + 1) : 0;
      } while (md.kx == 0 && md.ky == 0);
      md.amp = 2.0 * amplitude * (unit(gen) - 0.5);
      md.phase = 2.0 * std::numbers::pi * unit(gen);
      ms.push_back(md);
    }
    return ms;
  };
  const double scale_rho = 0.5 + 1.5 * unit(gen);
  const double scale_c = 0.5 + 1.5 * unit(gen);
  const auto rho_modes = draw_modes();
  const auto c_modes = draw_modes();
  auto eval = [&](const std::vector<Mode>& ms, double scale, double x, double y) {
    double e = 0.0;
    for (const auto& md : ms) {
      e += md.amp * std::cos(2.0 * std::numbers::pi * (md.kx * x / grid.lx + md.ky * y / grid.ly) + md.phase);
    }
    return scale * std::exp(e);
  };
  ScalarField rho(grid), c(grid);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.x_center(i), y = grid.y_center(j);
      rho.at(i, j) = eval(rho_modes, scale_rho, x, y);
      c.at(i, j) = eval(c_modes, scale_c, x, y);
    }
  }
  return {std::move(rho), std::move(c)};
}

SugiyamaEnsembleReport sugiyama_ensemble(const Grid& grid, int samples, std::uint64_t seed, int modes, double m, int d,
                                         double kappa, double xi) {
  require(samples >= 1, ErrorCode::InvalidArgument, "sugiyama_ensemble: need at least one sample");
  SugiyamaEnsembleReport rep;
  rep.samples = samples;
  for (int k = 0; k < samples; ++k) {
    const auto [rho, c] = random_smooth_pair(grid, seed + static_cast<std::uint64_t>(k), modes);
    const double req = sugiyama_audit(rho, c, m, d, kappa, xi).required_c1;
    if (req > rep.sup_required_c1) {
      rep.sup_required_c1 = req;
      rep.argmax = static_cast<std::size_t>(k);
    }
    if (k < (samples + 1) / 2) rep.sup_first_half = rep.sup_required_c1;
  }
  rep.finite = std::isfinite(rep.sup_required_c1);
  return rep;
}

CL1AuditReport c_l1_audit(std::span<const EnergyLedger> ledgers) {
  require(!ledgers.empty(), ErrorCode::InvalidArgument, "c_l1_audit needs at least one snapshot");
  CL1AuditReport rep;
  rep.bound = std::max(ledgers.front().c_l1, ledgers.front().mass);
  const double tol = 1e-10 * std::max(rep.bound, 1e-300);
  rep.bound_ok = true;
  rep.ode_ok = true;
  for (std::size_t n = 0; n < ledgers.size(); ++n) {
    rep.max_c_l1 = std::max(rep.max_c_l1, ledgers[n].c_l1);
    if (ledgers[n].c_l1 > rep.bound + tol) rep.bound_ok = false;
    if (n + 1 == ledgers.size()) break;
    const auto& a = ledgers[n];
    const auto& b = ledgers[n + 1];
    const double dt = b.t - a.t;
    const double predicted = dt * (a.mass - a.c_l1);
    const double residual = std::abs(b.c_l1 - a.c_l1 - predicted);
    const double allowed = dt * dt * std::max(std::abs(a.mass - a.c_l1), std::abs(b.mass - b.c_l1)) +
                           1e-13 * (std::abs(a.c_l1) + std::abs(a.mass));
    const double ratio = allowed > 0.0 ? residual / allowed : (residual > 0.0 ? 1e300 : 0.0);
    rep.max_ode_residual = std::max(rep.max_ode_residual, ratio);
    if (ratio > 1.0) rep.ode_ok = false;
  }
  rep.passed = rep.bound_ok && rep.ode_ok;
  std::ostringstream os;
  os.precision(8);
  os << "c L1 audit: max int c=" << rep.max_c_l1 << " bound=" << rep.bound << " (tol " << tol
     << ") worst ODE residual/tolerance=" << rep.max_ode_residual;
  rep.summary = os.str();
  return rep;
}

CL1AuditReport c_l1_audit(const Trajectory& traj, const PhysParams& params) {
  std::vector<EnergyLedger> ledgers;
  for (const auto& s : traj.snapshots) ledgers.push_back(energy_ledger(s, params));
  return c_l1_audit(ledgers);
}

double coupling_bound_constant(const State& s, const PhysParams& params) {
  const int d = std::max(s.grid().dim, 2);
  return sugiyama_audit(s.rho, s.c, params.gamma, d, 1.0 / (2.0 * (params.gamma - 1.0)), 0.25).required_c1;
}

}  // namespace vnsf
