#include "vnsf/operators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vnsf {

namespace {

struct Line {
  std::size_t base;
  std::size_t stride;
  int n;
};

template <class Fn>
void for_each_line(const Grid& g, int axis, Fn&& fn) {
  if (axis == 0) {
    for (int j = 0; j < g.ny; ++j) fn(Line{g.index(0, j), 1, g.nx});
  } else {
    for (int i = 0; i < g.nx; ++i) fn(Line{g.index(i, 0), static_cast<std::size_t>(g.nx), g.ny});
  }
}

double sign_of(Parity p) { return p == Parity::Even ? 1.0 : -1.0; }

// Value at line position k in [-1, n], ghosts by wrap or reflection.
inline double fetch(std::span<const double> a, const Line& L, int k, bool periodic, double sign) {
  if (k < 0) return periodic ? a[L.base + (L.n - 1) * L.stride] : sign * a[L.base];
  if (k >= L.n) return periodic ? a[L.base] : sign * a[L.base + (L.n - 1) * L.stride];
  return a[L.base + k * L.stride];
}

}  // namespace

void accumulate_central(const Grid& g, std::span<const double> in, int axis, Parity parity, double scale,
                        std::span<double> out) {
  const bool periodic = g.bc == BcKind::PeriodicAll;
  const double sign = sign_of(parity);
  const double f = scale / (2.0 * g.spacing(axis));
  for_each_line(g, axis, [&](const Line& L) {
    const std::size_t s = L.stride;
    const std::size_t b = L.base;
    for (int k = 1; k + 1 < L.n; ++k) {
      const std::size_t p = b + k * s;
      out[p] += (in[p + s] - in[p - s]) * f;
    }
    out[b] += (in[b + s] - fetch(in, L, -1, periodic, sign)) * f;
    const std::size_t last = b + (L.n - 1) * s;
    out[last] += (fetch(in, L, L.n, periodic, sign) - in[last - s]) * f;
  });
}

VectorField grad(const ScalarField& s, Parity parity) {
  const Grid& g = s.grid();
  VectorField out(g);
  for (int a = 0; a < g.dim; ++a) accumulate_central(g, s.values(), a, parity, 1.0, out.component(a));
  return out;
}

ScalarField div(const VectorField& u, Parity parity) {
  const Grid& g = u.grid();
  ScalarField out(g);
  for (int a = 0; a < g.dim; ++a) accumulate_central(g, u.component(a), a, parity, 1.0, out.values());
  return out;
}

ScalarField laplacian(const ScalarField& s) { return div(grad(s, Parity::Even), Parity::Odd); }

VectorField vector_laplacian(const VectorField& u) {
  const Grid& g = u.grid();
  VectorField out(g);
  std::vector<double> tmp(g.cells());
  for (int k = 0; k < g.dim; ++k) {
    for (int a = 0; a < g.dim; ++a) {
      std::fill(tmp.begin(), tmp.end(), 0.0);
      accumulate_central(g, u.component(k), a, Parity::Odd, 1.0, tmp);
      accumulate_central(g, tmp, a, Parity::Even, 1.0, out.component(k));
    }
  }
  return out;
}

VectorField grad_div(const VectorField& u) {
  const ScalarField d = div(u, Parity::Odd);
  return grad(d, Parity::Even);
}

VectorField directional_derivative(const VectorField& w, const VectorField& u) {
  require_same_grid(w.grid(), u.grid(), "directional_derivative");
  const Grid& g = u.grid();
  VectorField out(g);
  std::vector<double> tmp(g.cells());
  for (int k = 0; k < g.dim; ++k) {
    auto o = out.component(k);
    for (int a = 0; a < g.dim; ++a) {
      std::fill(tmp.begin(), tmp.end(), 0.0);
      accumulate_central(g, u.component(k), a, Parity::Odd, 1.0, tmp);
      const auto wa = w.component(a);
      for (std::size_t p = 0; p < tmp.size(); ++p) o[p] += wa[p] * tmp[p];
    }
  }
  return out;
}

ScalarField convect_scalar(const VectorField& v, const ScalarField& s) {
  require_same_grid(v.grid(), s.grid(), "convect_scalar");
  const Grid& g = s.grid();
  const bool periodic = g.bc == BcKind::PeriodicAll;
  ScalarField out(g);
  auto o = out.values();
  const auto sv = s.values();
  std::vector<double> flux;
  for (int a = 0; a < g.dim; ++a) {
    const auto va = v.component(a);
    const double inv_h = 1.0 / g.spacing(a);
    for_each_line(g, a, [&](const Line& L) {
      flux.assign(static_cast<std::size_t>(L.n) + 1, 0.0);
      for (int f = 0; f <= L.n; ++f) {
        if (periodic && f == L.n) {
          flux[f] = flux[0];
          break;
        }
        const double sl = fetch(sv, L, f - 1, periodic, 1.0);
        const double sr = fetch(sv, L, f, periodic, 1.0);
        const double vl = fetch(va, L, f - 1, periodic, -1.0);
        const double vr = fetch(va, L, f, periodic, -1.0);
        const double speed = std::max(std::abs(vl), std::abs(vr));
        flux[f] = 0.5 * (sl * vl + sr * vr) - 0.5 * speed * (sr - sl);
      }
      for (int k = 0; k < L.n; ++k) o[L.base + k * L.stride] += (flux[k + 1] - flux[k]) * inv_h;
    });
  }
  return out;
}

VectorField convect_momentum(const VectorField& v, const VectorField& m) {
  require_same_grid(v.grid(), m.grid(), "convect_momentum");
  const Grid& g = m.grid();
  const bool periodic = g.bc == BcKind::PeriodicAll;
  const int d = g.dim;
  VectorField out(g);
  std::vector<double> flux;
  for (int a = 0; a < d; ++a) {
    const auto va = v.component(a);
    const auto ma = m.component(a);
    const double inv_h = 1.0 / g.spacing(a);
    for_each_line(g, a, [&](const Line& L) {
      const std::size_t nf = static_cast<std::size_t>(L.n) + 1;
      flux.assign(nf * d, 0.0);
      for (int f = 0; f <= L.n; ++f) {
        if (periodic && f == L.n) {
          for (int k = 0; k < d; ++k) flux[k * nf + f] = flux[k * nf];
          break;
        }
        const double vl = fetch(va, L, f - 1, periodic, -1.0);
        const double vr = fetch(va, L, f, periodic, -1.0);
        const double speed = std::max(std::abs(vl), std::abs(vr));
        const double mass_flux = 0.5 * (fetch(ma, L, f - 1, periodic, -1.0) + fetch(ma, L, f, periodic, -1.0));
        for (int k = 0; k < d; ++k) {
          const auto vk = v.component(k);
          const auto mk = m.component(k);
          const double vkl = fetch(vk, L, f - 1, periodic, -1.0);
          const double vkr = fetch(vk, L, f, periodic, -1.0);
          const double mkl = fetch(mk, L, f - 1, periodic, -1.0);
          const double mkr = fetch(mk, L, f, periodic, -1.0);
          flux[k * nf + f] = mass_flux * 0.5 * (vkl + vkr) - 0.5 * speed * (mkr - mkl);
        }
      }
      for (int k = 0; k < d; ++k) {
        auto o = out.component(k);
        for (int c = 0; c < L.n; ++c) o[L.base + c * L.stride] += (flux[k * nf + c + 1] - flux[k * nf + c]) * inv_h;
      }
    });
  }
  return out;
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum * a.grid().cell_volume();
}

double inner(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  double sum = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) sum += av[k] * bv[k];
  return sum * a.grid().cell_volume();
}

}  // namespace vnsf
