#pragma once

// Free energy, modified energy and dissipation ledgers, and the audits built
// on them: the per-step energy inequality defect, the Sugiyama interpolation
// inequality and the L1 bound on the chemoattractant.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vnsf/fields.hpp"
#include "vnsf/thermo.hpp"

namespace vnsf {

struct EnergyLedger {
  double t = 0.0;
  double E = 0.0;
  double H = 0.0;
  double kinetic = 0.0;
  double internal = 0.0;
  double chem_h1 = 0.0;
  double coupling = 0.0;
  double diss_visc = 0.0;
  double diss_dtc = 0.0;
  double diss_drag = 0.0;
  double diss_eps_gamma = 0.0;
  double diss_delta = 0.0;
  double art_pressure_energy = 0.0;
  double mass = 0.0;
  double c_l1 = 0.0;
  // Extra integrals used by the audits.
  double rho_gamma = 0.0;   // int rho^gamma
  double rho_square = 0.0;  // int rho^2

  double total_dissipation() const { return diss_visc + diss_dtc + diss_drag + diss_eps_gamma + diss_delta; }
};

EnergyLedger energy_ledger(const State& state, const PhysParams& params);

// Column order of the simulate CSV.
std::string energy_csv_header();
std::string energy_csv_row(const EnergyLedger& ledger);

struct EnergyAuditReport {
  // D_n = E_{n+1} - E_n + dt_n * dissipation(t_n) - slack_n per interval.
  std::vector<double> defects;
  std::vector<double> dts;
  double max_defect = 0.0;
  // Smallest C with D_n <= C dt_n^2 + rounding_n for every interval.
  double c_fit = 0.0;
  double e_initial = 0.0;
  double e_final = 0.0;
  // Fitted constant in the eps-slack term 2 eps int rho^gamma + C eps.
  double slack_constant = 0.0;
  bool lemma_form = false;
  bool passed = false;
  std::string summary;
};

// Audits a per-step ledger sequence. With eps > 0 the inequality is checked
// in its regularised form, with slack (eps/4) int |dt c|^2 + 2 eps int rho^gamma
// + C eps on the right-hand side. Passes iff c_fit is finite and the final
// (augmented) energy does not exceed the initial one plus accumulated slack.
EnergyAuditReport energy_audit(std::span<const EnergyLedger> ledgers, const PhysParams& params);
EnergyAuditReport energy_audit(const Trajectory& traj, const PhysParams& params);

struct SugiyamaReport {
  double lhs = 0.0;        // int rho c
  double rho_term = 0.0;   // kappa ||rho||_m^m
  double grad_term = 0.0;  // xi ||grad c||^2
  double c_l1 = 0.0;
  double c2 = 0.0;
  double required_c1 = 0.0;
};

SugiyamaReport sugiyama_audit(const ScalarField& rho, const ScalarField& c, double m, int d, double kappa, double xi);

struct SugiyamaEnsembleReport {
  int samples = 0;
  double sup_required_c1 = 0.0;
  double sup_first_half = 0.0;
  std::size_t argmax = 0;
  bool finite = false;
};

// Random smooth positive field pairs sampled at the cell centres of `grid`.
// Each field is a positive scale times exp of a sum of `modes` cosines with
// coefficients in [-amplitude, amplitude]. The same seed produces the same
// analytic fields on any grid.
std::pair<ScalarField, ScalarField> random_smooth_pair(const Grid& grid, std::uint64_t seed, int modes,
                                                       double amplitude = 0.4);

SugiyamaEnsembleReport sugiyama_ensemble(const Grid& grid, int samples, std::uint64_t seed, int modes, double m,
                                         int d, double kappa, double xi);

struct CL1AuditReport {
  double bound = 0.0;        // max(int c0, int rho0)
  double max_c_l1 = 0.0;
  double max_ode_residual = 0.0;  // worst |residual| / tolerance over steps
  bool bound_ok = false;
  bool ode_ok = false;
  bool passed = false;
  std::string summary;
};

// Checks int c(t) <= max(int c0, int rho0) (relative tolerance 1e-10) and the
// per-step increment against d/dt int c = int rho - int c to O(dt^2).
CL1AuditReport c_l1_audit(std::span<const EnergyLedger> ledgers);
CL1AuditReport c_l1_audit(const Trajectory& traj, const PhysParams& params);

// Sugiyama audit with the choices that bound E from below by H: m = gamma,
// kappa = 1/(2(gamma-1)), xi = 1/4. Returns the required C1 for one state.
double coupling_bound_constant(const State& state, const PhysParams& params);

}  // namespace vnsf
