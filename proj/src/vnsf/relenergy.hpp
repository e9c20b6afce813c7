#pragma once

// Relative energy of a state with respect to a reference triple (r, u, z),
// the residuals f, g, h measuring how far the reference is from solving the
// system, the remainder R of the relative energy inequality, and the audits
// and weak-strong diagnostic built on them.

#include <array>
#include <string>
#include <vector>

#include "vnsf/dynamics.hpp"

namespace vnsf {

// Reference fields with their time derivatives. The derivatives come either
// from an analytic solution or from differencing reference snapshots.
struct ReferenceState {
  State state;
  ScalarField dt_r;
  VectorField dt_u;
  ScalarField dt_z;
};

// Reference with vanishing time derivatives (e.g. a steady state).
ReferenceState frozen_reference(const State& state);

// Time derivatives by central differences of the snapshot sequence,
// second-order one-sided at both ends. Needs at least three snapshots.
std::vector<ReferenceState> differentiate_snapshots(const std::vector<State>& snapshots);

VectorField residual_f(const ReferenceState& ref, const PhysParams& params);
ScalarField residual_g(const ReferenceState& ref);
ScalarField residual_h(const ReferenceState& ref);

// The eight integrals making up R, in order:
//   -int p(rho|r) div u, -int psi''(r)(rho-r) g, -int h dt(c-z),
//   -int grad(c-z).((rho-r) u), +int (c-z) g, -int rho (v-u)(x)(v-u):grad u,
//   -(1/zeta) int rho |v-u|^2, -int ((rho-r)/r visc(u) + rho f).(v-u).
// dt(c - z) uses the state's chemoattractant rate lap c - c + rho.
using RemainderTerms = std::array<double, 8>;
RemainderTerms remainder_terms(const State& state, const ReferenceState& ref, const VectorField& f,
                               const ScalarField& g, const ScalarField& h, const PhysParams& params);

struct RelEnergyLedger {
  double t = 0.0;
  double rel_E = 0.0;
  double rel_H = 0.0;
  double rel_diss_visc = 0.0;
  double rel_diss_dtc = 0.0;
  double remainder_R = 0.0;
  RemainderTerms terms{};
  double f_norm = 0.0;
  double g_norm = 0.0;
  double h_norm = 0.0;
  double coupling_rel = 0.0;
};

struct RelativeEnergies {
  double rel_E = 0.0;
  double rel_H = 0.0;
  double coupling_rel = 0.0;
};

// rel_E and rel_H only; needs no time derivatives.
RelativeEnergies relative_energies(const State& state, const State& ref, const PhysParams& params);

RelEnergyLedger relative_ledger(const State& state, const ReferenceState& ref, const PhysParams& params);

// J1..J5 at one time for a reference assumed to solve the system exactly.
std::array<double, 5> j_term_breakdown(const State& state, const State& ref, const PhysParams& params);

// Per-interval defects rel_E(n+1) - rel_E(n) + ds (rel_diss_visc + rel_diss_dtc)
// - ds R, all evaluated at the left end (ds = t(n+1) - t(n)).
std::vector<double> relenergy_defects(const std::vector<State>& weak, const std::vector<ReferenceState>& refs,
                                      const PhysParams& params);

struct RelAuditReport {
  std::vector<double> times;
  std::vector<RelEnergyLedger> ledgers;
  // Per-interval defect of the relative energy inequality at the finest
  // snapshot spacing, and its running sum.
  std::vector<double> defects;
  std::vector<double> cumulative;
  std::vector<double> tolerances;
  std::vector<double> cumulative_tolerances;
  double spacing = 0.0;
  // Fitted tolerance C_t ds^2 + C_x ds, fitted at spacings 4 ds and 2 ds and
  // checked at ds.
  double c_time = 0.0;
  double c_space = 0.0;
  double worst_ratio = 0.0;
  bool passed = false;
  std::string summary;
};

// Audits weak against strong. The strong trajectory may live on a finer grid
// and is restricted to the weak one by cell averaging; snapshot times must
// agree. Needs at least nine snapshots.
RelAuditReport relenergy_audit(const Trajectory& weak, const Trajectory& strong, const PhysParams& params);

struct WeakStrongLevel {
  int n = 0;
  std::vector<double> times;
  std::vector<double> rel_H;
  std::vector<double> rel_E;
  double sup_rel_H = 0.0;
  double fit_a = 0.0;
  double fit_b = 0.0;
  double lower_bound_c = 0.0;  // smallest C with rel_E >= rel_H / 2 - C
  double ratio = 0.0;          // previous level's sup over this one's
};

struct WeakStrongReport {
  int fine_n = 0;
  std::vector<WeakStrongLevel> levels;
  double min_ratio = 0.0;
  double required_ratio = 1.5;
  bool passed = false;
  std::string table;
};

// Runs the fine problem and each coarse level from the restriction of the
// same fine initial data, and measures rel_H(coarse | restricted fine) along
// aligned snapshots. Coarse levels are listed coarse to fine.
WeakStrongReport weak_strong_diagnostic(const State& fine_initial, const PhysParams& params,
                                        const SchemeSettings& settings, const std::vector<int>& coarse_levels,
                                        double required_ratio = 1.5);

}  // namespace vnsf
