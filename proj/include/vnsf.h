/*
 * C interface to the chemotaxis Navier-Stokes simulator.
 *
 * All objects are opaque handles released with their *_free function. Every
 * fallible call returns a vnsf_status; on failure vnsf_last_error() returns a
 * message for the calling thread that stays valid until its next failing call.
 */
#ifndef VNSF_H
#define VNSF_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(VNSF_BUILDING)
#define VNSF_API __attribute__((visibility("default")))
#else
#define VNSF_API
#endif

typedef enum vnsf_status {
  VNSF_OK = 0,
  VNSF_ERR_INVALID_ARGUMENT = 1,
  VNSF_ERR_GRID_MISMATCH = 2,
  VNSF_ERR_NON_FINITE = 3,
  VNSF_ERR_PARSE = 4,
  VNSF_ERR_IO = 5,
  VNSF_ERR_FORMAT = 6,
  VNSF_ERR_RUNTIME = 7,
  VNSF_ERR_NULL_ARGUMENT = 8,
  VNSF_ERR_OUT_OF_RANGE = 9,
  VNSF_ERR_INTERNAL = 10
} vnsf_status;

typedef enum vnsf_bc { VNSF_BC_PERIODIC = 0, VNSF_BC_PAPER = 1 } vnsf_bc;

typedef enum vnsf_field { VNSF_FIELD_RHO = 0, VNSF_FIELD_V1 = 1, VNSF_FIELD_V2 = 2, VNSF_FIELD_C = 3 } vnsf_field;

typedef enum vnsf_experiment {
  VNSF_EXPERIMENT_SIMULATE = 0,
  VNSF_EXPERIMENT_ENERGY_AUDIT = 1,
  VNSF_EXPERIMENT_SUGIYAMA_CHECK = 2,
  VNSF_EXPERIMENT_MMS_CONVERGENCE = 3,
  VNSF_EXPERIMENT_RELENERGY_AUDIT = 4,
  VNSF_EXPERIMENT_WEAK_STRONG = 5
} vnsf_experiment;

typedef struct vnsf_config vnsf_config;
typedef struct vnsf_state vnsf_state;
typedef struct vnsf_trajectory vnsf_trajectory;
typedef struct vnsf_report vnsf_report;

typedef struct vnsf_grid_info {
  int dim;
  int nx;
  int ny;
  double hx;
  double hy;
  double t;
  vnsf_bc bc;
} vnsf_grid_info;

typedef struct vnsf_energy {
  double t;
  double E;
  double H;
  double kinetic;
  double internal;
  double chem_h1;
  double coupling;
  double diss_visc;
  double diss_dtc;
  double diss_drag;
  double diss_eps_gamma;
  double diss_delta;
  double art_pressure_energy;
  double mass;
  double c_l1;
} vnsf_energy;

VNSF_API const char* vnsf_version(void);
VNSF_API const char* vnsf_last_error(void);
VNSF_API const char* vnsf_status_string(vnsf_status status);
VNSF_API void vnsf_string_free(char* text);

/* Configuration */
VNSF_API vnsf_status vnsf_config_parse(const char* text, vnsf_config** out);
VNSF_API vnsf_status vnsf_config_load(const char* path, vnsf_config** out);
/* Full key listing; release with vnsf_string_free. */
VNSF_API vnsf_status vnsf_config_serialize(const vnsf_config* config, char** out_text);
VNSF_API size_t vnsf_config_warning_count(const vnsf_config* config);
VNSF_API const char* vnsf_config_warning(const vnsf_config* config, size_t index);
VNSF_API const char* vnsf_config_out_dir(const vnsf_config* config);
VNSF_API void vnsf_config_free(vnsf_config* config);

/* States */
VNSF_API vnsf_status vnsf_initial_state(const vnsf_config* config, vnsf_state** out);
VNSF_API vnsf_status vnsf_state_read(const char* path, vnsf_state** out);
VNSF_API vnsf_status vnsf_state_write(const vnsf_state* state, const char* path);
VNSF_API vnsf_status vnsf_state_info(const vnsf_state* state, vnsf_grid_info* out);
/* Borrowed view of one field plane, valid while the state lives. */
VNSF_API vnsf_status vnsf_state_field(const vnsf_state* state, vnsf_field field, const double** data, size_t* length);
VNSF_API vnsf_status vnsf_energy_ledger(const vnsf_config* config, const vnsf_state* state, vnsf_energy* out);
VNSF_API void vnsf_state_free(vnsf_state* state);

/* Runs; a run that aborts still yields a trajectory with completed == 0. */
VNSF_API vnsf_status vnsf_simulate(const vnsf_config* config, vnsf_trajectory** out);
VNSF_API size_t vnsf_trajectory_size(const vnsf_trajectory* trajectory);
VNSF_API int vnsf_trajectory_completed(const vnsf_trajectory* trajectory);
VNSF_API const char* vnsf_trajectory_diagnostic(const vnsf_trajectory* trajectory);
VNSF_API size_t vnsf_trajectory_steps(const vnsf_trajectory* trajectory);
/* Copy of one snapshot; release with vnsf_state_free. */
VNSF_API vnsf_status vnsf_trajectory_snapshot(const vnsf_trajectory* trajectory, size_t index, vnsf_state** out);
VNSF_API void vnsf_trajectory_free(vnsf_trajectory* trajectory);

/* Experiments. out_dir is used by VNSF_EXPERIMENT_SIMULATE (NULL or "" writes
 * nothing); threshold is the order threshold of VNSF_EXPERIMENT_MMS_CONVERGENCE. */
VNSF_API vnsf_status vnsf_run_experiment(const vnsf_config* config, vnsf_experiment experiment, const char* out_dir,
                                         double threshold, vnsf_report** out);
VNSF_API int vnsf_report_passed(const vnsf_report* report);
VNSF_API const char* vnsf_report_name(const vnsf_report* report);
VNSF_API const char* vnsf_report_text(const vnsf_report* report);
VNSF_API const char* vnsf_report_csv(const vnsf_report* report);
VNSF_API void vnsf_report_free(vnsf_report* report);

#ifdef __cplusplus
}
#endif

#endif /* VNSF_H */
