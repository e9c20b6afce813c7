#pragma once

// Experiment drivers behind the command-line subcommands. Each returns a
// report whose lines are printed as-is; every PASS/FAIL line carries the
// measured defect and the tolerance it was held to.

#include <string>
#include <vector>

#include "vnsf/config.hpp"

namespace vnsf {

struct ExperimentReport {
  std::string name;
  bool passed = false;
  std::vector<std::string> lines;
  // Table written next to the outputs (may be empty).
  std::string csv;

  std::string text() const;
};

// Runs the configured problem, writing energy.csv (one ledger row per step)
// and snapshot_NNNNN.vnsf files into out_dir. An empty out_dir writes nothing.
ExperimentReport simulate_experiment(const RunConfig& config, const std::string& out_dir);

// Energy inequality audit over Courant numbers scaled by 1, 1/2, ...; also
// audits the L1 bound of c and the coupling bound of the modified energy.
ExperimentReport energy_audit_experiment(const RunConfig& config);

// Exponent check plus the random-field ensemble at nx and 2 nx.
ExperimentReport sugiyama_experiment(const RunConfig& config);

ExperimentReport mms_experiment(const RunConfig& config, double threshold);

// Weak run at re_weak against the nx run restricted to re_weak.
ExperimentReport relenergy_experiment(const RunConfig& config);

ExperimentReport weak_strong_experiment(const RunConfig& config);

}  // namespace vnsf
