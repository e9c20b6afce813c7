#pragma once

// Grid geometry, cell-centred scalar/vector fields and the simulation state.
//
// All fields live on a uniform collocated grid; values are stored row-major
// (x fastest). Vector fields are stored as one plane per component.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vnsf/error.hpp"

namespace vnsf {

enum class BcKind {
  PeriodicAll,
  // No-slip velocity, homogeneous Neumann for density and chemoattractant.
  PaperBC,
};

std::string to_string(BcKind bc);
BcKind bc_from_string(const std::string& token);

struct Grid {
  int dim = 2;
  int nx = 0;
  int ny = 1;
  double hx = 0.0;
  double hy = 1.0;
  double lx = 0.0;
  double ly = 1.0;
  BcKind bc = BcKind::PeriodicAll;

  std::size_t cells() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  double cell_volume() const { return hx * hy; }
  double h_min() const { return dim == 1 ? hx : (hx < hy ? hx : hy); }
  double x_center(int i) const { return (i + 0.5) * hx; }
  double y_center(int j) const { return dim == 1 ? 0.0 : (j + 0.5) * hy; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  double spacing(int axis) const { return axis == 0 ? hx : hy; }
  int extent(int axis) const { return axis == 0 ? nx : ny; }

  bool operator==(const Grid&) const = default;
};

// Builds a grid with hx = lx/nx, hy = ly/ny. For dim == 1 the y direction is a
// single unit-width cell, so cell volumes reduce to hx.
Grid make_grid(int dim, int nx, int ny, double lx, double ly, BcKind bc);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double at(int i, int j = 0) const { return values_[grid_.index(i, j)]; }
  double& at(int i, int j = 0) { return values_[grid_.index(i, j)]; }

  bool operator==(const ScalarField&) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& grid, double fill = 0.0);
  VectorField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  std::size_t cells() const { return grid_.cells(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  std::span<const double> component(int k) const {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(k) * cells(), cells());
  }
  std::span<double> component(int k) {
    return std::span<double>(values_).subspan(static_cast<std::size_t>(k) * cells(), cells());
  }
  double operator()(int k, std::size_t cell) const { return values_[static_cast<std::size_t>(k) * cells() + cell]; }
  double& operator()(int k, std::size_t cell) { return values_[static_cast<std::size_t>(k) * cells() + cell]; }

  bool operator==(const VectorField&) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

struct PhysParams {
  double gamma = 2.0;
  double mu = 0.1;
  double lam = 0.0;
  double zeta = 1.0;
  double eps = 0.0;
  double delta = 0.0;
  double beta = 4.5;

  bool operator==(const PhysParams&) const = default;
};

void validate(const PhysParams& params);

struct State {
  double t = 0.0;
  ScalarField rho;
  VectorField v;
  ScalarField c;

  const Grid& grid() const { return rho.grid(); }
  bool operator==(const State&) const = default;
};

State make_state(const Grid& grid, double t, ScalarField rho, VectorField v, ScalarField c);
State constant_state(const Grid& grid, double rho, double c);

// Throws on NaN/Inf anywhere, on mismatched grids, or on rho/c below
// -1e-13 * max(rho).
void validate_state(const State& state);

// Midpoint rule hx*hy*sum(values), summed sequentially in storage order.
double integrate_cellwise(const ScalarField& field);
double integrate_values(const Grid& grid, std::span<const double> values);

// Cell-average restriction onto a coarser grid whose cell counts divide the
// fine ones. Density, momentum and c are averaged; velocity is recovered from
// the averaged momentum.
State restrict_state(const State& fine, const Grid& coarse);

struct Provenance {
  std::string integrator = "heun2";
  double cfl_adv = 0.0;
  double cfl_diff = 0.0;
  std::uint64_t seed = 0;
};

struct Trajectory {
  Grid grid;
  PhysParams params;
  Provenance provenance;
  std::vector<State> snapshots;
  bool completed = true;
  std::string diagnostic;
  std::size_t steps = 0;
  double min_rho = 0.0;
  double min_c = 0.0;

  void append(State s);
};

}  // namespace vnsf
