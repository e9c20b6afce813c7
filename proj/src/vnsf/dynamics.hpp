#pragma once

// Semidiscrete right-hand side of the chemotaxis Navier-Stokes system (with
// optional artificial viscosity eps and artificial pressure delta*rho^beta),
// explicit Heun time stepping and trajectory runs.

#include <array>
#include <functional>
#include <optional>

#include "vnsf/fields.hpp"

namespace vnsf {

// Analytic source terms, evaluated at cell centres. The momentum source enters
// as rho * f_mom.
struct Forcing {
  std::function<std::array<double, 2>(double x, double y, double t)> f_mom;
  std::function<double(double x, double y, double t)> g_mass;
  std::function<double(double x, double y, double t)> h_chem;

  bool empty() const { return !f_mom && !g_mass && !h_chem; }
};

struct ModelSwitches {
  // Drop div(rho v) and div(rho v (x) v); used for the diffusion-reaction MMS
  // subsystem.
  bool convection = true;

  bool operator==(const ModelSwitches&) const = default;
};

struct SchemeSettings {
  double cfl_adv = 0.5;
  double cfl_diff = 0.8;
  double rho_floor = 1e-10;
  double t_end = 0.0;
  // Keep every n-th step; ignored when snapshot_dt > 0.
  int snapshot_stride = 1;
  // Snapshot at exact multiples of this interval (steps are shortened to land
  // on them).
  double snapshot_dt = 0.0;
  ModelSwitches switches;
  std::uint64_t seed = 0;

  bool operator==(const SchemeSettings&) const = default;
};

void validate(const SchemeSettings& settings);

struct Rates {
  ScalarField drho;
  VectorField dm;
  ScalarField dc;
};

// Momentum m = rho v of a state.
VectorField momentum(const State& state);

// Pressure potential w with grad p(rho) + delta grad rho^beta = rho grad w.
double pressure_potential(double rho, const PhysParams& params);

Rates rhs(const State& state, const PhysParams& params, const Forcing& forcing = {}, const ModelSwitches& switches = {});

// Explicit time step from the advective and diffusive limits.
double stable_dt(const State& state, const PhysParams& params, const SchemeSettings& settings);

// One Heun step of size dt.
State heun_step(const State& state, const PhysParams& params, const Forcing& forcing, const SchemeSettings& settings,
                double dt);

// One Heun step with dt from stable_dt.
State step(const State& state, const PhysParams& params, const Forcing& forcing, const SchemeSettings& settings);

// Called after every accepted step with the new state, the step size and
// whether the state is a snapshot under the stride/snapshot_dt rule.
using StepObserver = std::function<void(const State& state, double dt, bool snapshot)>;

// Steps until t_end. On failure the partial trajectory is returned with
// completed == false and the error message in diagnostic. With
// retain_snapshots == false only the initial and the last state are kept;
// the observer still sees every snapshot.
Trajectory run(const State& initial, const PhysParams& params, const Forcing& forcing, const SchemeSettings& settings,
               const StepObserver& observer = {}, bool retain_snapshots = true);

}  // namespace vnsf
