#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "vnsf/fields.hpp"

namespace testing_support {

inline constexpr double kPi = 3.14159265358979323846;

inline vnsf::ScalarField random_scalar(const vnsf::Grid& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  vnsf::ScalarField s(g);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = u(rng);
  return s;
}

inline vnsf::VectorField random_vector(const vnsf::Grid& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  vnsf::VectorField v(g);
  for (double& x : v.values()) x = u(rng);
  return v;
}

inline vnsf::State random_state(const vnsf::Grid& g, std::mt19937_64& rng) {
  return vnsf::make_state(g, 0.0, random_scalar(g, rng, 0.5, 2.0), random_vector(g, rng, -0.5, 0.5),
                          random_scalar(g, rng, 0.2, 1.5));
}

inline vnsf::State blob_state(const vnsf::Grid& g, double amplitude = 0.5, double width = 0.1) {
  vnsf::ScalarField rho(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double dx = g.x_center(i) - 0.5 * g.lx;
      const double dy = g.dim == 2 ? g.y_center(j) - 0.5 * g.ly : 0.0;
      rho.at(i, j) = 1.0 + amplitude * std::exp(-(dx * dx + dy * dy) / (width * width));
    }
  }
  return vnsf::make_state(g, 0.0, rho, vnsf::VectorField(g), vnsf::ScalarField(g));
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace testing_support
