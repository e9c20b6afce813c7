#pragma once

// Manufactured solutions: analytic (r, u, z) with closed-form derivatives, the
// forcing that turns them into exact solutions of the forced system, and the
// refinement harness measuring observed convergence orders.

#include <array>
#include <string>
#include <vector>

#include "vnsf/dynamics.hpp"

namespace vnsf {

// amp * exp(rate t) * sin(2 pi kx x / lx + phx) * sin(2 pi ky y / ly + phy).
// A zero wave number with phase pi/2 gives a factor independent of that axis.
struct Mode {
  double amp = 0.0;
  double rate = 0.0;
  int kx = 0;
  int ky = 0;
  double phx = 0.0;
  double phy = 0.0;
};

struct AnalyticField {
  double base = 0.0;
  std::vector<Mode> modes;
  double lx = 1.0;
  double ly = 1.0;

  double value(double x, double y, double t) const;
  double dt(double x, double y, double t) const;
  std::array<double, 2> grad(double x, double y, double t) const;
  // (xx, xy, yy)
  std::array<double, 3> hessian(double x, double y, double t) const;
};

struct Manufactured {
  int dim = 2;
  AnalyticField r;
  std::array<AnalyticField, 2> u;
  AnalyticField z;
};

// Smooth time-dependent solution on the periodic box [0,lx] x [0,ly] with
// density bounded away from zero.
Manufactured default_manufactured(int dim, double lx = 1.0, double ly = 1.0);

// Pointwise residuals f, g, h of the (optionally convection-free) system, and
// the momentum source f_mom handed to rhs().
struct PointResidual {
  std::array<double, 2> f{};
  std::array<double, 2> f_mom{};
  double g = 0.0;
  double h = 0.0;
};
PointResidual manufactured_residual(const Manufactured& ms, const PhysParams& params, bool convection, double x,
                                    double y, double t);

// Forcing for rhs(): g_mass = g, h_chem = h and the momentum source adjusted
// so that rho * f_mom reproduces the momentum balance when g != 0.
Forcing manufactured_forcing(const Manufactured& ms, const PhysParams& params, bool convection);

State sample_state(const Manufactured& ms, const Grid& grid, double t);

// sqrt(||rho - r||^2 + ||v - u||^2 + ||c - z||^2).
double l2_error(const State& numeric, const State& exact);

struct MmsLevel {
  int n = 0;
  double h = 0.0;
  double error = 0.0;
  double order = 0.0;  // against the previous level; 0 for the first
  std::size_t steps = 0;
};

struct MmsReport {
  std::vector<MmsLevel> levels;
  double min_order = 0.0;
  double threshold = 0.0;
  bool convection = true;
  bool passed = false;
  std::string table;
};

MmsReport mms_convergence(const Manufactured& ms, const PhysParams& params, const SchemeSettings& base,
                          const std::vector<int>& levels, double t_end, double threshold);

}  // namespace vnsf
