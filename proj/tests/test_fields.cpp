#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"
#include "vnsf/fields.hpp"

using namespace vnsf;
using testing_support::kPi;

TEST_SUITE("fields") {
  TEST_CASE("grid geometry") {
    const Grid g = make_grid(2, 8, 8, 1.0, 1.0, BcKind::PeriodicAll);
    CHECK(g.hx == 0.125);
    CHECK(g.hy == 0.125);
    CHECK(g.x_center(0) == 0.0625);
    CHECK(g.index(3, 2) == 19u);

    const Grid g1 = make_grid(1, 16, 1, 2.0, 1.0, BcKind::PaperBC);
    CHECK(g1.hx == 0.125);
    CHECK(g1.ny == 1);
    CHECK(g1.cell_volume() == 0.125);
  }

  TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(make_grid(2, 2, 8, 1.0, 1.0, BcKind::PeriodicAll), Error);
    CHECK_THROWS_AS(make_grid(2, 8, 2, 1.0, 1.0, BcKind::PeriodicAll), Error);
    CHECK_THROWS_AS(make_grid(3, 8, 8, 1.0, 1.0, BcKind::PeriodicAll), Error);
    CHECK_THROWS_AS(make_grid(2, 8, 8, 0.0, 1.0, BcKind::PeriodicAll), Error);
    CHECK_THROWS_AS(make_grid(2, 8, 8, 1.0, -1.0, BcKind::PeriodicAll), Error);
  }

  TEST_CASE("bc tokens") {
    CHECK(bc_from_string("periodic") == BcKind::PeriodicAll);
    CHECK(bc_from_string("paper") == BcKind::PaperBC);
    CHECK(to_string(BcKind::PaperBC) == "paper");
    CHECK_THROWS_AS(bc_from_string("dirichlet"), Error);
  }

  TEST_CASE("midpoint integration") {
    const Grid g = make_grid(2, 8, 8, 1.0, 1.0, BcKind::PeriodicAll);
    CHECK(integrate_cellwise(ScalarField(g, 3.0)) == doctest::Approx(3.0).epsilon(1e-15));

    const Grid g1 = make_grid(1, 4, 1, 1.0, 1.0, BcKind::PaperBC);
    ScalarField x(g1);
    for (int i = 0; i < 4; ++i) x.at(i) = g1.x_center(i);
    CHECK(integrate_cellwise(x) == 0.5);

    const Grid gp = make_grid(1, 64, 1, 1.0, 1.0, BcKind::PeriodicAll);
    ScalarField s(gp);
    for (int i = 0; i < 64; ++i) s.at(i) = std::sin(2.0 * kPi * gp.x_center(i));
    CHECK(std::abs(integrate_cellwise(s)) <= 1e-12);

    ScalarField bad(g, 1.0);
    bad[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(integrate_cellwise(bad), Error);
  }

  TEST_CASE("physical parameter invariants cite the violated condition") {
    PhysParams p;
    CHECK_NOTHROW(validate(p));
    p.mu = -1.0;
    CHECK_THROWS_WITH_AS(validate(p), doctest::Contains("μ>0"), Error);
    p = PhysParams{};
    p.lam = -1.0;
    CHECK_THROWS_WITH_AS(validate(p), doctest::Contains("3λ+2μ>0"), Error);
    p = PhysParams{};
    p.delta = 0.1;
    p.beta = 4.0;
    CHECK_THROWS_WITH_AS(validate(p), doctest::Contains("β>4"), Error);
    p = PhysParams{};
    p.gamma = 1.0;
    CHECK_THROWS_AS(validate(p), Error);
    p = PhysParams{};
    p.zeta = 0.0;
    CHECK_THROWS_AS(validate(p), Error);
  }

  TEST_CASE("state validation") {
    const Grid g = make_grid(2, 8, 8, 1.0, 1.0, BcKind::PeriodicAll);
    State s = constant_state(g, 1.0, 1.0);
    CHECK_NOTHROW(validate_state(s));
    s.v(1, 3) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(validate_state(s), Error);
    s = constant_state(g, 1.0, 1.0);
    s.rho[2] = -0.5;
    CHECK_THROWS_AS(validate_state(s), Error);

    const Grid other = make_grid(2, 16, 16, 1.0, 1.0, BcKind::PeriodicAll);
    CHECK_THROWS_AS(make_state(g, 0.0, ScalarField(g, 1.0), VectorField(other), ScalarField(g)), Error);
  }

  TEST_CASE("restriction conserves mass, momentum and c") {
    std::mt19937_64 rng(7);
    const Grid fine = make_grid(2, 16, 16, 1.0, 1.0, BcKind::PaperBC);
    const Grid coarse = make_grid(2, 4, 4, 1.0, 1.0, BcKind::PaperBC);
    const State s = testing_support::random_state(fine, rng);
    const State r = restrict_state(s, coarse);
    CHECK(integrate_cellwise(r.rho) == doctest::Approx(integrate_cellwise(s.rho)).epsilon(1e-14));
    CHECK(integrate_cellwise(r.c) == doctest::Approx(integrate_cellwise(s.c)).epsilon(1e-14));
    for (int k = 0; k < 2; ++k) {
      double mf = 0.0, mc = 0.0;
      for (std::size_t q = 0; q < fine.cells(); ++q) mf += s.rho[q] * s.v(k, q) * fine.cell_volume();
      for (std::size_t q = 0; q < coarse.cells(); ++q) mc += r.rho[q] * r.v(k, q) * coarse.cell_volume();
      CHECK(mc == doctest::Approx(mf).epsilon(1e-12));
    }
    const State same = restrict_state(s, fine);
    CHECK(same.rho == s.rho);
    for (std::size_t q = 0; q < 2 * fine.cells(); ++q) CHECK(same.v.values()[q] == doctest::Approx(s.v.values()[q]).epsilon(1e-14));
    CHECK_THROWS_AS(restrict_state(s, make_grid(2, 6, 6, 1.0, 1.0, BcKind::PaperBC)), Error);
  }

  TEST_CASE("trajectory times must increase") {
    const Grid g = make_grid(1, 8, 1, 1.0, 1.0, BcKind::PeriodicAll);
    Trajectory tr;
    State s = constant_state(g, 1.0, 0.0);
    tr.append(s);
    CHECK_THROWS_AS(tr.append(s), Error);
    s.t = 0.5;
    CHECK_NOTHROW(tr.append(s));
  }
}
