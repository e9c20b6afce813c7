#pragma once

// Run configuration: a line-oriented `key = value` text format with `#`
// comments, its parser and serializer, and the initial conditions it names.

#include <cstdint>
#include <string>
#include <vector>

#include "vnsf/dynamics.hpp"

namespace vnsf {

struct InitialCondition {
  enum class Kind { Constant, GaussianBlob, RandomSmooth, FromSnapshot };
  Kind kind = Kind::GaussianBlob;
  // Constant state (rho, 0, c); for the blob, c is the uniform initial c.
  double rho = 1.0;
  double c = 0.0;
  // rho = background + amplitude * exp(-|x - center|^2 / width^2)
  double center_x = 0.5;
  double center_y = 0.5;
  double width = 0.1;
  double amplitude = 0.5;
  double background = 1.0;
  // Random smooth positive (rho, c), zero velocity; seeded by RunConfig::seed.
  int modes = 3;
  double smooth_amplitude = 0.4;
  std::string path;

  bool operator==(const InitialCondition&) const = default;
};

std::string to_string(InitialCondition::Kind kind);

struct RunConfig {
  int dim = 2;
  int nx = 64;
  int ny = 64;
  double lx = 1.0;
  double ly = 1.0;
  BcKind bc = BcKind::PeriodicAll;
  PhysParams phys;
  SchemeSettings scheme = [] {
    SchemeSettings s;
    s.t_end = 0.1;
    return s;
  }();
  InitialCondition ic;
  std::uint64_t seed = 0;
  // Dimension assumed by the analysis thresholds (gamma > 8/5 in 3-D).
  int analysis_dim = 3;
  bool audit_energy = true;
  bool audit_c_l1 = true;
  std::string out_dir = "out";

  // energy-audit: Courant numbers scaled by 1, 1/2, ... over this many runs,
  // and the allowed relative spread of the fitted constants.
  int energy_levels = 3;
  double energy_variation = 0.2;
  // sugiyama-check
  int sugiyama_samples = 100;
  int sugiyama_modes = 3;
  double sugiyama_m = 2.0;
  int sugiyama_d = 2;
  double sugiyama_kappa = 0.25;
  double sugiyama_xi = 0.25;
  double sugiyama_drift = 0.02;
  // mms-convergence
  std::vector<int> mms_levels{16, 32, 64};
  bool mms_convection = true;
  // relenergy-audit: weak resolution (strong is nx) and snapshot count.
  int re_weak = 32;
  int re_snapshots = 16;
  // weak-strong: coarse resolutions (fine is nx) and required ratio.
  std::vector<int> ws_coarse{16, 32, 64};
  double ws_ratio = 1.5;

  // Non-fatal analysis notes produced while parsing.
  std::vector<std::string> warnings;

  Grid grid() const;
  bool operator==(const RunConfig&) const = default;
};

// Unknown keys, duplicates, malformed values and violated invariants are
// errors naming the line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// Writes every key, so parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

State initial_state(const RunConfig& config);

}  // namespace vnsf
