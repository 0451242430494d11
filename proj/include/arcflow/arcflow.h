#ifndef ARCFLOW_ARCFLOW_H
#define ARCFLOW_ARCFLOW_H

/*
 * C interface to the arcflow solver library.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns an arcf_status; on failure a message for the calling
 * thread is available from arcf_last_error() until the next failing call.
 * Output pointers are left untouched when a call fails.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ARCFLOW_BUILDING_LIB)
#    define ARCFLOW_API __declspec(dllexport)
#  else
#    define ARCFLOW_API __declspec(dllimport)
#  endif
#else
#  define ARCFLOW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum arcf_status {
  ARCF_OK = 0,
  ARCF_INVALID_ARGUMENT = 1,
  ARCF_GRID_MISMATCH = 2,
  ARCF_NON_FINITE = 3,
  ARCF_POSITIVITY_VIOLATION = 4,
  ARCF_CONFIG = 5,
  ARCF_IO = 6,
  ARCF_FORMAT = 7,
  ARCF_DEGENERATE_INPUT = 8,
  ARCF_INTERNAL = 99
} arcf_status;

typedef struct arcf_field arcf_field;
typedef struct arcf_config arcf_config;
typedef struct arcf_trajectory arcf_trajectory;
typedef struct arcf_report arcf_report;

ARCFLOW_API const char* arcf_version(void);
ARCFLOW_API const char* arcf_last_error(void);
ARCFLOW_API const char* arcf_status_name(arcf_status status);

/* Fields: samples at x_j = 2 pi j / n, n even and >= 16. */
ARCFLOW_API arcf_status arcf_field_create(const double* values, size_t n, arcf_field** out);
ARCFLOW_API void arcf_field_destroy(arcf_field* f);
ARCFLOW_API size_t arcf_field_size(const arcf_field* f);
ARCFLOW_API const double* arcf_field_values(const arcf_field* f);

/* Spectral operators; each returns a new field in *out. */
ARCFLOW_API arcf_status arcf_hilbert(const arcf_field* f, arcf_field** out);
ARCFLOW_API arcf_status arcf_frac_laplacian(const arcf_field* f, arcf_field** out);
ARCFLOW_API arcf_status arcf_derivative(const arcf_field* f, arcf_field** out);
ARCFLOW_API arcf_status arcf_heat(const arcf_field* f, double tau, arcf_field** out);
/* Singular-integral form of the half Laplacian with m quadrature nodes. */
ARCFLOW_API arcf_status arcf_frac_laplacian_kernel(const arcf_field* f, size_t m,
                                                   arcf_field** out);
ARCFLOW_API arcf_status arcf_sobolev_seminorm(const arcf_field* f, double s, double* out);
ARCFLOW_API arcf_status arcf_tendency(const arcf_field* u, double delta, int dealias,
                                      arcf_field** out);

/* Configuration. Keys are "section.key". */
ARCFLOW_API arcf_status arcf_config_create(arcf_config** out);
ARCFLOW_API arcf_status arcf_config_parse(const char* text, arcf_config** out);
ARCFLOW_API void arcf_config_destroy(arcf_config* c);
ARCFLOW_API arcf_status arcf_config_set(arcf_config* c, const char* key, const char* value);
ARCFLOW_API arcf_status arcf_config_validate(const arcf_config* c);
/* Resolved text; the pointer stays valid until the next call on c. */
ARCFLOW_API const char* arcf_config_resolved(arcf_config* c);

/* Solves from u0 with the [solver] section of c. */
ARCFLOW_API arcf_status arcf_solve(const arcf_config* c, const arcf_field* u0,
                                   arcf_trajectory** out);
ARCFLOW_API void arcf_trajectory_destroy(arcf_trajectory* t);
ARCFLOW_API size_t arcf_trajectory_snapshot_count(const arcf_trajectory* t);
ARCFLOW_API double arcf_trajectory_snapshot_time(const arcf_trajectory* t, size_t i);
/* Copy of snapshot i; fails for an out-of-range index. */
ARCFLOW_API arcf_status arcf_trajectory_snapshot(const arcf_trajectory* t, size_t i,
                                                 arcf_field** out);
ARCFLOW_API size_t arcf_trajectory_step_count(const arcf_trajectory* t);
ARCFLOW_API arcf_status arcf_trajectory_write_csv(const arcf_trajectory* t,
                                                  const char* snapshots_path,
                                                  const char* diagnostics_path);

typedef struct arcf_energy_budget {
  double h12_sq_sup;
  double dissipation_cum;
  double initial_h12_sq;
  double bound_ratio;
} arcf_energy_budget;

typedef struct arcf_extremum_report {
  double min_drift;
  double max_drift;
} arcf_extremum_report;

ARCFLOW_API arcf_status arcf_energy_budget_of(const arcf_trajectory* t, arcf_energy_budget* out);
ARCFLOW_API arcf_status arcf_extremum_of(const arcf_trajectory* t, arcf_extremum_report* out);

/* Roots of p' for p = prod (x - roots[i]); writes n - 1 values. */
ARCFLOW_API arcf_status arcf_derivative_roots(const double* roots, size_t n, double* out);
/* floor(t n) derivatives; *out_n receives the count written (out holds n). */
ARCFLOW_API arcf_status arcf_root_flow(const double* roots, size_t n, double t, double* out,
                                       size_t* out_n);

/* Experiment drivers (solve, sweep-delta, smoothing, stability,
 * roots-compare, check-operators). */
ARCFLOW_API arcf_status arcf_run_experiment(const char* command, const arcf_config* c,
                                            const char* out_dir, arcf_report** out);
ARCFLOW_API void arcf_report_destroy(arcf_report* r);
/* 0 when every check passed, otherwise the category code of the first failure. */
ARCFLOW_API int arcf_report_exit_code(const arcf_report* r);
ARCFLOW_API const char* arcf_report_summary(const arcf_report* r);

#ifdef __cplusplus
}
#endif

#endif /* ARCFLOW_ARCFLOW_H */
