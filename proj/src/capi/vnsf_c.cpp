#include "vnsf.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "vnsf/config.hpp"
#include "vnsf/energetics.hpp"
#include "vnsf/experiments.hpp"
#include "vnsf/snapshot.hpp"

struct vnsf_config {
  vnsf::RunConfig cfg;
};

struct vnsf_state {
  vnsf::State state;
};

struct vnsf_trajectory {
  vnsf::Trajectory traj;
};

struct vnsf_report {
  vnsf::ExperimentReport report;
  std::string text;
};

namespace {

thread_local std::string g_last_error;

vnsf_status set_error(vnsf_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

vnsf_status from_code(vnsf::ErrorCode code) {
  switch (code) {
    case vnsf::ErrorCode::InvalidArgument:
      return VNSF_ERR_INVALID_ARGUMENT;
    case vnsf::ErrorCode::GridMismatch:
      return VNSF_ERR_GRID_MISMATCH;
    case vnsf::ErrorCode::NonFinite:
      return VNSF_ERR_NON_FINITE;
    case vnsf::ErrorCode::Parse:
      return VNSF_ERR_PARSE;
    case vnsf::ErrorCode::Io:
      return VNSF_ERR_IO;
    case vnsf::ErrorCode::Format:
      return VNSF_ERR_FORMAT;
    case vnsf::ErrorCode::Runtime:
      return VNSF_ERR_RUNTIME;
  }
  return VNSF_ERR_INTERNAL;
}

template <class Fn>
vnsf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const vnsf::Error& e) {
    return set_error(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(VNSF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(VNSF_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(VNSF_ERR_INTERNAL, "unknown error");
  }
}

vnsf_status null_arg(const char* what) { return set_error(VNSF_ERR_NULL_ARGUMENT, std::string(what) + " is NULL"); }

}  // namespace

extern "C" {

const char* vnsf_version(void) { return "1.0.0"; }

const char* vnsf_last_error(void) { return g_last_error.c_str(); }

const char* vnsf_status_string(vnsf_status status) {
  switch (status) {
    case VNSF_OK:
      return "ok";
    case VNSF_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case VNSF_ERR_GRID_MISMATCH:
      return "grid mismatch";
    case VNSF_ERR_NON_FINITE:
      return "non-finite value";
    case VNSF_ERR_PARSE:
      return "parse error";
    case VNSF_ERR_IO:
      return "i/o error";
    case VNSF_ERR_FORMAT:
      return "format error";
    case VNSF_ERR_RUNTIME:
      return "runtime error";
    case VNSF_ERR_NULL_ARGUMENT:
      return "null argument";
    case VNSF_ERR_OUT_OF_RANGE:
      return "index out of range";
    case VNSF_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void vnsf_string_free(char* text) { delete[] text; }

vnsf_status vnsf_config_parse(const char* text, vnsf_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new vnsf_config{vnsf::parse_config(text)};
    return VNSF_OK;
  });
}

vnsf_status vnsf_config_load(const char* path, vnsf_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new vnsf_config{vnsf::load_config(path)};
    return VNSF_OK;
  });
}

vnsf_status vnsf_config_serialize(const vnsf_config* config, char** out_text) {
  if (!config) return null_arg("config");
  if (!out_text) return null_arg("out_text");
  *out_text = nullptr;
  return guarded([&] {
    const std::string s = vnsf::serialize_config(config->cfg);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out_text = buf;
    return VNSF_OK;
  });
}

size_t vnsf_config_warning_count(const vnsf_config* config) { return config ? config->cfg.warnings.size() : 0; }

const char* vnsf_config_warning(const vnsf_config* config, size_t index) {
  if (!config || index >= config->cfg.warnings.size()) return nullptr;
  return config->cfg.warnings[index].c_str();
}

const char* vnsf_config_out_dir(const vnsf_config* config) { return config ? config->cfg.out_dir.c_str() : nullptr; }

void vnsf_config_free(vnsf_config* config) { delete config; }

vnsf_status vnsf_initial_state(const vnsf_config* config, vnsf_state** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new vnsf_state{vnsf::initial_state(config->cfg)};
    return VNSF_OK;
  });
}

vnsf_status vnsf_state_read(const char* path, vnsf_state** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new vnsf_state{vnsf::read_snapshot(path)};
    return VNSF_OK;
  });
}

vnsf_status vnsf_state_write(const vnsf_state* state, const char* path) {
  if (!state) return null_arg("state");
  if (!path) return null_arg("path");
  return guarded([&] {
    vnsf::write_snapshot(state->state, path);
    return VNSF_OK;
  });
}

vnsf_status vnsf_state_info(const vnsf_state* state, vnsf_grid_info* out) {
  if (!state) return null_arg("state");
  if (!out) return null_arg("out");
  const vnsf::Grid& g = state->state.grid();
  out->dim = g.dim;
  out->nx = g.nx;
  out->ny = g.ny;
  out->hx = g.hx;
  out->hy = g.hy;
  out->t = state->state.t;
  out->bc = g.bc == vnsf::BcKind::PeriodicAll ? VNSF_BC_PERIODIC : VNSF_BC_PAPER;
  return VNSF_OK;
}

vnsf_status vnsf_state_field(const vnsf_state* state, vnsf_field field, const double** data, size_t* length) {
  if (!state) return null_arg("state");
  if (!data || !length) return null_arg("data/length");
  const vnsf::State& s = state->state;
  std::span<const double> plane;
  switch (field) {
    case VNSF_FIELD_RHO:
      plane = s.rho.values();
      break;
    case VNSF_FIELD_V1:
      plane = s.v.component(0);
      break;
    case VNSF_FIELD_V2:
      if (s.grid().dim < 2) return set_error(VNSF_ERR_OUT_OF_RANGE, "v2 requested from a one-dimensional state");
      plane = s.v.component(1);
      break;
    case VNSF_FIELD_C:
      plane = s.c.values();
      break;
    default:
      return set_error(VNSF_ERR_OUT_OF_RANGE, "unknown field");
  }
  *data = plane.data();
  *length = plane.size();
  return VNSF_OK;
}

vnsf_status vnsf_energy_ledger(const vnsf_config* config, const vnsf_state* state, vnsf_energy* out) {
  if (!config) return null_arg("config");
  if (!state) return null_arg("state");
  if (!out) return null_arg("out");
  return guarded([&] {
    const vnsf::EnergyLedger L = vnsf::energy_ledger(state->state, config->cfg.phys);
    *out = vnsf_energy{L.t,         L.E,         L.H,         L.kinetic,        L.internal,
                       L.chem_h1,   L.coupling,  L.diss_visc, L.diss_dtc,       L.diss_drag,
                       L.diss_eps_gamma, L.diss_delta, L.art_pressure_energy, L.mass, L.c_l1};
    return VNSF_OK;
  });
}

void vnsf_state_free(vnsf_state* state) { delete state; }

vnsf_status vnsf_simulate(const vnsf_config* config, vnsf_trajectory** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const auto& c = config->cfg;
    *out = new vnsf_trajectory{vnsf::run(vnsf::initial_state(c), c.phys, {}, c.scheme)};
    return VNSF_OK;
  });
}

size_t vnsf_trajectory_size(const vnsf_trajectory* t) { return t ? t->traj.snapshots.size() : 0; }

int vnsf_trajectory_completed(const vnsf_trajectory* t) { return t && t->traj.completed ? 1 : 0; }

const char* vnsf_trajectory_diagnostic(const vnsf_trajectory* t) { return t ? t->traj.diagnostic.c_str() : nullptr; }

size_t vnsf_trajectory_steps(const vnsf_trajectory* t) { return t ? t->traj.steps : 0; }

vnsf_status vnsf_trajectory_snapshot(const vnsf_trajectory* t, size_t index, vnsf_state** out) {
  if (!t) return null_arg("trajectory");
  if (!out) return null_arg("out");
  *out = nullptr;
  if (index >= t->traj.snapshots.size()) {
    return set_error(VNSF_ERR_OUT_OF_RANGE, "snapshot index " + std::to_string(index) + " out of range (size " +
                                                std::to_string(t->traj.snapshots.size()) + ")");
  }
  return guarded([&] {
    *out = new vnsf_state{t->traj.snapshots[index]};
    return VNSF_OK;
  });
}

void vnsf_trajectory_free(vnsf_trajectory* t) { delete t; }

vnsf_status vnsf_run_experiment(const vnsf_config* config, vnsf_experiment experiment, const char* out_dir,
                                double threshold, vnsf_report** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const auto& c = config->cfg;
    vnsf::ExperimentReport r;
    switch (experiment) {
      case VNSF_EXPERIMENT_SIMULATE:
        r = vnsf::simulate_experiment(c, out_dir ? out_dir : "");
        break;
      case VNSF_EXPERIMENT_ENERGY_AUDIT:
        r = vnsf::energy_audit_experiment(c);
        break;
      case VNSF_EXPERIMENT_SUGIYAMA_CHECK:
        r = vnsf::sugiyama_experiment(c);
        break;
      case VNSF_EXPERIMENT_MMS_CONVERGENCE:
        r = vnsf::mms_experiment(c, threshold);
        break;
      case VNSF_EXPERIMENT_RELENERGY_AUDIT:
        r = vnsf::relenergy_experiment(c);
        break;
      case VNSF_EXPERIMENT_WEAK_STRONG:
        r = vnsf::weak_strong_experiment(c);
        break;
      default:
        return set_error(VNSF_ERR_OUT_OF_RANGE, "unknown experiment");
    }
    auto* rep = new vnsf_report{std::move(r), {}};
    rep->text = rep->report.text();
    *out = rep;
    return VNSF_OK;
  });
}

int vnsf_report_passed(const vnsf_report* r) { return r && r->report.passed ? 1 : 0; }

const char* vnsf_report_name(const vnsf_report* r) { return r ? r->report.name.c_str() : nullptr; }

const char* vnsf_report_text(const vnsf_report* r) { return r ? r->text.c_str() : nullptr; }

const char* vnsf_report_csv(const vnsf_report* r) { return r ? r->report.csv.c_str() : nullptr; }

void vnsf_report_free(vnsf_report* r) { delete r; }

}  // extern "C"
