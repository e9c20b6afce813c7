#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "support.hpp"
#include "vnsf/operators.hpp"

using namespace vnsf;
using testing_support::kPi;
using testing_support::max_abs;

namespace {

// Independent oracle: one plane extended with one ghost layer per side along
// `axis`, then centred differences.
double ghost(const std::vector<double>& p, const Grid& g, int i, int j, bool even) {
  const bool periodic = g.bc == BcKind::PeriodicAll;
  auto wrap = [](int a, int n) { return ((a % n) + n) % n; };
  double sign = 1.0;
  if (i < 0 || i >= g.nx) {
    if (periodic) {
      i = wrap(i, g.nx);
    } else {
      i = i < 0 ? -1 - i : 2 * g.nx - 1 - i;
      sign = even ? 1.0 : -1.0;
    }
  }
  if (j < 0 || j >= g.ny) {
    if (periodic) {
      j = wrap(j, g.ny);
    } else {
      j = j < 0 ? -1 - j : 2 * g.ny - 1 - j;
      sign *= even ? 1.0 : -1.0;
    }
  }
  return sign * p[g.index(i, j)];
}

std::vector<double> oracle_d(const std::vector<double>& p, const Grid& g, int axis, bool even) {
  std::vector<double> out(g.cells());
  const double h = g.spacing(axis);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int di = axis == 0 ? 1 : 0, dj = axis == 1 ? 1 : 0;
      out[g.index(i, j)] = (ghost(p, g, i + di, j + dj, even) - ghost(p, g, i - di, j - dj, even)) / (2.0 * h);
    }
  }
  return out;
}

std::vector<double> plane(std::span<const double> s) { return {s.begin(), s.end()}; }

ScalarField sample(const Grid& g, double (*f)(double, double)) {
  ScalarField s(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) s.at(i, j) = f(g.x_center(i), g.y_center(j));
  return s;
}

const BcKind kBcs[] = {BcKind::PeriodicAll, BcKind::PaperBC};

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("gradient of a constant vanishes") {
    for (BcKind bc : kBcs) {
      const Grid g = make_grid(2, 8, 8, 1.0, 1.0, bc);
      CHECK(max_abs(grad(ScalarField(g, 3.5)).values()) == 0.0);
      CHECK(max_abs(laplacian(ScalarField(g, 3.5)).values()) == 0.0);
    }
  }

  TEST_CASE("first derivatives match the ghost-cell oracle") {
    std::mt19937_64 rng(3);
    for (BcKind bc : kBcs) {
      const Grid g = make_grid(2, 8, 6, 1.0, 0.75, bc);
      const ScalarField s = testing_support::random_scalar(g, rng, -1.0, 1.0);
      const VectorField u = testing_support::random_vector(g, rng, -1.0, 1.0);
      const VectorField gs = grad(s, Parity::Even);
      const ScalarField du = div(u, Parity::Odd);
      std::vector<double> div_oracle(g.cells(), 0.0);
      for (int a = 0; a < 2; ++a) {
        const auto o = oracle_d(plane(s.values()), g, a, true);
        const auto got = gs.component(a);
        for (std::size_t k = 0; k < g.cells(); ++k) CHECK(got[k] == doctest::Approx(o[k]).epsilon(1e-13));
        const auto ou = oracle_d(plane(u.component(a)), g, a, false);
        for (std::size_t k = 0; k < g.cells(); ++k) div_oracle[k] += ou[k];
      }
      for (std::size_t k = 0; k < g.cells(); ++k) CHECK(du[k] == doctest::Approx(div_oracle[k]).epsilon(1e-13));
    }
  }

  TEST_CASE("composite operators are the stated compositions") {
    std::mt19937_64 rng(5);
    for (BcKind bc : kBcs) {
      const Grid g = make_grid(2, 8, 8, 1.0, 1.0, bc);
      const ScalarField s = testing_support::random_scalar(g, rng, -1.0, 1.0);
      const VectorField u = testing_support::random_vector(g, rng, -1.0, 1.0);

      const ScalarField lap = laplacian(s);
      std::vector<double> lap_o(g.cells(), 0.0);
      for (int a = 0; a < 2; ++a) {
        const auto da = oracle_d(oracle_d(plane(s.values()), g, a, true), g, a, false);
        for (std::size_t k = 0; k < g.cells(); ++k) lap_o[k] += da[k];
      }
      for (std::size_t k = 0; k < g.cells(); ++k) CHECK(lap[k] == doctest::Approx(lap_o[k]).epsilon(1e-12));

      const VectorField vl = vector_laplacian(u);
      for (int c = 0; c < 2; ++c) {
        std::vector<double> o(g.cells(), 0.0);
        for (int a = 0; a < 2; ++a) {
          const auto da = oracle_d(oracle_d(plane(u.component(c)), g, a, false), g, a, true);
          for (std::size_t k = 0; k < g.cells(); ++k) o[k] += da[k];
        }
        for (std::size_t k = 0; k < g.cells(); ++k) CHECK(vl(c, k) == doctest::Approx(o[k]).epsilon(1e-12));
      }

      const VectorField gd = grad_div(u);
      const ScalarField d = div(u);
      const VectorField gd_o = grad(d, Parity::Even);
      CHECK(gd == gd_o);
    }
  }

  TEST_CASE("summation by parts") {
    std::mt19937_64 rng(9);
    for (BcKind bc : kBcs) {
      const Grid g = make_grid(2, 12, 10, 1.0, 1.0, bc);
      for (int trial = 0; trial < 5; ++trial) {
        const ScalarField s = testing_support::random_scalar(g, rng, -1.0, 1.0);
        const VectorField u = testing_support::random_vector(g, rng, -1.0, 1.0);
        const double lhs = inner(grad(s, Parity::Even), u);
        const double rhs = -inner(s, div(u, Parity::Odd));
        CHECK(std::abs(lhs - rhs) <= 1e-13);
        const double lhs2 = inner(grad(s, Parity::Odd), u);
        const double rhs2 = -inner(s, div(u, Parity::Even));
        CHECK(std::abs(lhs2 - rhs2) <= 1e-13);
        // Hence <lap s, s> = -|grad s|^2 <= 0.
        const VectorField gs = grad(s);
        CHECK(std::abs(inner(laplacian(s), s) + inner(gs, gs)) <= 1e-12);
      }
    }
  }

  TEST_CASE("polynomial exactness") {
    const Grid g = make_grid(1, 16, 1, 1.0, 1.0, BcKind::PaperBC);
    const ScalarField q = sample(g, [](double x, double) { return x * x; });
    const ScalarField lin = sample(g, [](double x, double) { return 3.0 * x - 1.0; });
    const ScalarField lap = laplacian(q);
    const VectorField gl = grad(lin);
    for (int i = 2; i < g.nx - 2; ++i) CHECK(lap.at(i) == doctest::Approx(2.0).epsilon(1e-12));
    for (int i = 1; i < g.nx - 1; ++i) CHECK(gl(0, i) == doctest::Approx(3.0).epsilon(1e-12));
  }

  TEST_CASE("second-order accuracy on smooth periodic data") {
    auto err = [](int n) {
      const Grid g = make_grid(2, n, n, 1.0, 1.0, BcKind::PeriodicAll);
      const ScalarField s = sample(g, [](double x, double y) { return std::sin(2 * kPi * x) * std::cos(2 * kPi * y); });
      const ScalarField lap = laplacian(s);
      double e = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k) e = std::max(e, std::abs(lap[k] + 8 * kPi * kPi * s[k]));
      return e;
    };
    const double ratio = err(16) / err(32);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("convection fluxes") {
    for (BcKind bc : kBcs) {
      const Grid g = make_grid(2, 8, 8, 1.0, 1.0, bc);
      CHECK(max_abs(convect_scalar(VectorField(g), ScalarField(g, 2.0)).values()) == 0.0);
      CHECK(max_abs(convect_momentum(VectorField(g), VectorField(g)).values()) == 0.0);
    }
    const Grid g = make_grid(2, 16, 16, 1.0, 1.0, BcKind::PeriodicAll);
    // Discretely divergence-free: v = (sin 2 pi y, sin 2 pi x).
    VectorField v(g);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        v(0, g.index(i, j)) = std::sin(2 * kPi * g.y_center(j));
        v(1, g.index(i, j)) = std::sin(2 * kPi * g.x_center(i));
      }
    }
    const ScalarField cs = convect_scalar(v, ScalarField(g, 1.7));
    CHECK(std::abs(integrate_cellwise(cs)) <= 1e-12);

    VectorField vc(g), mc(g);
    for (std::size_t k = 0; k < g.cells(); ++k) {
      vc(0, k) = 0.3, vc(1, k) = -0.2;
      mc(0, k) = 1.5 * 0.3, mc(1, k) = 1.5 * -0.2;
    }
    CHECK(max_abs(convect_momentum(vc, mc).values()) <= 1e-12);
    CHECK(max_abs(convect_scalar(vc, ScalarField(g, 1.5)).values()) <= 1e-12);
  }

  TEST_CASE("flux divergence on eight cells matches a hand-built flux sum") {
    for (BcKind bc : kBcs) {
      const Grid g = make_grid(1, 8, 1, 1.0, 1.0, bc);
      const bool periodic = bc == BcKind::PeriodicAll;
      ScalarField s(g);
      VectorField v(g);
      for (int i = 0; i < 8; ++i) {
        const double x = g.x_center(i);
        s.at(i) = 1.0 + 0.5 * x * x;
        v(0, i) = std::sin(3.0 * x) - 0.4;
      }
      // Extended arrays with one ghost per side.
      double se[10], ve[10];
      for (int i = 0; i < 8; ++i) se[i + 1] = s.at(i), ve[i + 1] = v(0, i);
      if (periodic) {
        se[0] = se[8], se[9] = se[1], ve[0] = ve[8], ve[9] = ve[1];
      } else {
        se[0] = se[1], se[9] = se[8], ve[0] = -ve[1], ve[9] = -ve[8];
      }
      double flux[9];
      for (int f = 0; f < 9; ++f) {
        const double a = std::max(std::abs(ve[f]), std::abs(ve[f + 1]));
        flux[f] = 0.5 * (se[f] * ve[f] + se[f + 1] * ve[f + 1]) - 0.5 * a * (se[f + 1] - se[f]);
      }
      const ScalarField got = convect_scalar(v, s);
      for (int i = 0; i < 8; ++i) CHECK(got.at(i) == doctest::Approx((flux[i + 1] - flux[i]) / g.hx).epsilon(1e-12));
      // No-slip walls carry no flux, so the total is exactly conserved.
      CHECK(std::abs(integrate_cellwise(got)) <= 1e-12);
    }
  }

  TEST_CASE("grid mismatch is rejected") {
    const Grid a = make_grid(2, 8, 8, 1.0, 1.0, BcKind::PeriodicAll);
    const Grid b = make_grid(2, 16, 16, 1.0, 1.0, BcKind::PeriodicAll);
    CHECK_THROWS_AS(inner(ScalarField(a), ScalarField(b)), Error);
    CHECK_THROWS_AS(convect_scalar(VectorField(a), ScalarField(b)), Error);
  }
}
