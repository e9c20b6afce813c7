#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vnsf/dynamics.hpp"
#include "vnsf/energetics.hpp"
#include "vnsf/operators.hpp"

using namespace vnsf;

namespace {

SchemeSettings settings_until(double t_end) {
  SchemeSettings s;
  s.t_end = t_end;
  return s;
}

std::vector<EnergyLedger> per_step_ledgers(const State& init, const PhysParams& p, const SchemeSettings& st) {
  std::vector<EnergyLedger> out{energy_ledger(init, p)};
  const Trajectory tr = run(init, p, {}, st, [&](const State& s, double, bool) { out.push_back(energy_ledger(s, p)); },
                            false);
  REQUIRE(tr.completed);
  return out;
}

}  // namespace

TEST_SUITE("energetics") {
  TEST_CASE("constant state energies") {
    const Grid g = make_grid(2, 8, 8, 1.0, 1.0, BcKind::PaperBC);
    const EnergyLedger L = energy_ledger(constant_state(g, 1.0, 1.0), PhysParams{});
    // psi(1) = 1, chem 1/2, coupling 1.
    CHECK(L.E == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(L.H == doctest::Approx(0.5 * 1.0 + 0.5).epsilon(1e-14));
    CHECK(L.internal == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(L.coupling == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(L.kinetic == 0.0);
    CHECK(L.diss_dtc == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(L.mass == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(L.c_l1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(L.E == doctest::Approx(L.internal + L.kinetic + L.chem_h1 - L.coupling).epsilon(1e-14));
  }

  TEST_CASE("v = 0 and c = 0 leaves only the internal energy") {
    const Grid g = make_grid(2, 16, 16, 1.0, 1.0, BcKind::PeriodicAll);
    const State s = testing_support::blob_state(g);
    const EnergyLedger L = energy_ledger(s, PhysParams{});
    double psi = 0.0;
    for (std::size_t k = 0; k < g.cells(); ++k) psi += s.rho[k] * s.rho[k];
    CHECK(L.E == doctest::Approx(psi * g.cell_volume()).epsilon(1e-13));
    CHECK(L.kinetic == 0.0);
    CHECK(L.chem_h1 == 0.0);
    CHECK(L.coupling == 0.0);
  }

  TEST_CASE("drag dissipation") {
    const Grid g = make_grid(2, 8, 8, 1.0, 1.0, BcKind::PeriodicAll);
    State s = constant_state(g, 1.0, 0.0);
    for (std::size_t k = 0; k < g.cells(); ++k) s.v(0, k) = 0.6, s.v(1, k) = 0.8;
    PhysParams p;
    p.zeta = 2.0;
    CHECK(energy_ledger(s, p).diss_drag == doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("viscous dissipation equals minus the viscous work") {
    std::mt19937_64 rng(21);
    for (BcKind bc : {BcKind::PeriodicAll, BcKind::PaperBC}) {
      const Grid g = make_grid(2, 12, 12, 1.0, 1.0, bc);
      State s = testing_support::random_state(g, rng);
      PhysParams p;
      p.mu = 0.3;
      p.lam = 0.1;
      const VectorField lap = vector_laplacian(s.v);
      const VectorField gd = grad_div(s.v);
      const double work = p.mu * inner(lap, s.v) + (p.lam + p.mu) * inner(gd, s.v);
      CHECK(energy_ledger(s, p).diss_visc == doctest::Approx(-work).epsilon(1e-12));
    }
  }

  TEST_CASE("regularisation terms") {
    const Grid g = make_grid(1, 32, 1, 1.0, 1.0, BcKind::PeriodicAll);
    PhysParams p;
    p.eps = 1e-3;
    p.delta = 1e-4;
    const EnergyLedger L = energy_ledger(constant_state(g, 2.0, 0.0), p);
    CHECK(L.diss_eps_gamma == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(L.diss_delta == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(L.art_pressure_energy == doctest::Approx(1e-4 / 3.5 * std::pow(2.0, 4.5)).epsilon(1e-13));
  }

  TEST_CASE("energy audit on a steady state has zero defects") {
    for (BcKind bc : {BcKind::PeriodicAll, BcKind::PaperBC}) {
      const Grid g = make_grid(2, 16, 16, 1.0, 1.0, bc);
      const auto ledgers = per_step_ledgers(constant_state(g, 1.0, 1.0), PhysParams{}, settings_until(0.01));
      const EnergyAuditReport a = energy_audit(ledgers, PhysParams{});
      CHECK(a.passed);
      for (double d : a.defects) CHECK(std::abs(d) <= 1e-13);
    }
  }

  TEST_CASE("energy audit on a blob run") {
    const Grid g = make_grid(2, 24, 24, 1.0, 1.0, BcKind::PeriodicAll);
    const auto ledgers = per_step_ledgers(testing_support::blob_state(g), PhysParams{}, settings_until(0.02));
    const EnergyAuditReport a = energy_audit(ledgers, PhysParams{});
    CHECK(a.passed);
    CHECK(std::isfinite(a.c_fit));
    CHECK(a.e_final <= a.e_initial);
    CHECK(a.defects.size() == ledgers.size() - 1);
    for (std::size_t n = 0; n < a.defects.size(); ++n) {
      CHECK(a.defects[n] <= a.c_fit * a.dts[n] * a.dts[n] + 1e-12 * std::abs(a.e_initial));
    }
  }

  TEST_CASE("Sugiyama audit closed forms") {
    const Grid g = make_grid(2, 8, 8, 1.0, 1.0, BcKind::PeriodicAll);
    CHECK(sugiyama_audit(ScalarField(g, 0.0), ScalarField(g, 1.0), 2.0, 2, 0.25, 0.25).required_c1 == 0.0);
    const SugiyamaReport r = sugiyama_audit(ScalarField(g, 1.0), ScalarField(g, 1.0), 2.0, 2, 1.0, 0.25);
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.rho_term == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.grad_term == 0.0);
    CHECK(r.required_c1 == doctest::Approx(0.0).epsilon(1e-14));
    // With kappa = 1/4: excess 3/4 over ||c||_1^2 = 1.
    CHECK(sugiyama_audit(ScalarField(g, 1.0), ScalarField(g, 1.0), 2.0, 2, 0.25, 0.25).required_c1 ==
          doctest::Approx(0.75).epsilon(1e-13));
    CHECK_THROWS_AS(sugiyama_audit(ScalarField(g, -1.0), ScalarField(g, 1.0), 2.0, 2, 0.25, 0.25), Error);
    CHECK_THROWS_AS(sugiyama_audit(ScalarField(g, 1.0), ScalarField(g, 1.0), 1.6, 3, 0.25, 0.25), Error);
  }

  TEST_CASE("random smooth pairs") {
    const Grid a = make_grid(2, 16, 16, 1.0, 1.0, BcKind::PeriodicAll);
    const auto [r1, c1] = random_smooth_pair(a, 42, 3);
    const auto [r2, c2] = random_smooth_pair(a, 42, 3);
    CHECK(r1 == r2);
    CHECK(c1 == c2);
    for (std::size_t k = 0; k < a.cells(); ++k) {
      CHECK(r1[k] > 0.0);
      CHECK(c1[k] > 0.0);
    }
    const auto [r3, c3] = random_smooth_pair(a, 43, 3);
    CHECK_FALSE(r3 == r1);
    (void)c2;
    (void)c3;
  }

  TEST_CASE("Sugiyama ensemble is finite and deterministic") {
    const Grid g = make_grid(2, 16, 16, 1.0, 1.0, BcKind::PeriodicAll);
    const auto e1 = sugiyama_ensemble(g, 20, 5, 3, 2.0, 2, 0.25, 0.25);
    const auto e2 = sugiyama_ensemble(g, 20, 5, 3, 2.0, 2, 0.25, 0.25);
    CHECK(e1.finite);
    CHECK(e1.samples == 20);
    CHECK(e1.sup_required_c1 == e2.sup_required_c1);
    CHECK(e1.sup_required_c1 >= e1.sup_first_half);
  }

  TEST_CASE("c L1 bound with c0 = 0") {
    const Grid g = make_grid(2, 16, 16, 1.0, 1.0, BcKind::PeriodicAll);
    const State init = testing_support::blob_state(g);
    const auto ledgers = per_step_ledgers(init, PhysParams{}, settings_until(0.05));
    const CL1AuditReport c = c_l1_audit(ledgers);
    CHECK(c.passed);
    const double mass = ledgers.front().mass;
    CHECK(c.bound == doctest::Approx(mass).epsilon(1e-14));
    for (std::size_t n = 1; n < ledgers.size(); ++n) {
      CHECK(ledgers[n].c_l1 >= ledgers[n - 1].c_l1);
      // Exact ODE solution M (1 - e^{-t}).
      CHECK(ledgers[n].c_l1 == doctest::Approx(mass * (1.0 - std::exp(-ledgers[n].t))).epsilon(1e-6));
    }
  }

  TEST_CASE("c L1 decay without density") {
    const Grid g = make_grid(2, 8, 8, 1.0, 1.0, BcKind::PaperBC);
    const State init = constant_state(g, 0.0, 1.0);
    const auto ledgers = per_step_ledgers(init, PhysParams{}, settings_until(0.1));
    const CL1AuditReport c = c_l1_audit(ledgers);
    CHECK(c.passed);
    for (std::size_t n = 1; n < ledgers.size(); ++n) {
      const double dt = ledgers[n].t - ledgers[n - 1].t;
      const double exact = ledgers[n - 1].c_l1 * std::exp(-dt);
      // Heun is exact to third order in dt on the linear ODE.
      CHECK(std::abs(ledgers[n].c_l1 - exact) <= dt * dt);
    }
    CHECK(ledgers.back().c_l1 == doctest::Approx(std::exp(-0.1)).epsilon(1e-6));
  }

  TEST_CASE("coupling bound keeps E above H minus the c term") {
    const Grid g = make_grid(2, 16, 16, 1.0, 1.0, BcKind::PeriodicAll);
    const auto [rho, c] = random_smooth_pair(g, 9, 3);
    const State s = make_state(g, 0.0, rho, VectorField(g), c);
    const PhysParams p;
    const double c1 = coupling_bound_constant(s, p);
    const EnergyLedger L = energy_ledger(s, p);
    const double c2 = sugiyama_exponents(p.gamma, 2).c2;
    CHECK(L.E >= L.H - c1 * std::pow(L.c_l1, c2) - 1e-12 * std::abs(L.H));
  }
}
