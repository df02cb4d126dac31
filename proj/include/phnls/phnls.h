/* C interface to the phnls simulator. All handles are opaque; every call
 * returns a phnls_status and, on failure, phnls_last_error() describes it
 * (thread-local, valid until the next call on the same thread). */
#ifndef PHNLS_PHNLS_H
#define PHNLS_PHNLS_H

#include <stddef.h>
#include <stdint.h>

#if defined(PHNLS_BUILDING_LIBRARY)
#define PHNLS_API __attribute__((visibility("default")))
#else
#define PHNLS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum phnls_status {
  PHNLS_OK = 0,
  PHNLS_ERR_INVALID_ARGUMENT = 1,
  PHNLS_ERR_DOMAIN = 2,
  PHNLS_ERR_NUMERICAL = 3,
  PHNLS_ERR_IO = 4,
  PHNLS_ERR_PARSE = 5,
  PHNLS_ERR_INTERNAL = 6
} phnls_status;

typedef enum phnls_system { PHNLS_SYSTEM_PNLS = 0, PHNLS_SYSTEM_DCR = 1 } phnls_system;

typedef struct phnls_grid phnls_grid;
typedef struct phnls_field phnls_field;
typedef struct phnls_tensor phnls_tensor;

#define PHNLS_MAX_LAMBDAS 16
#define PHNLS_PATH_MAX 1024

typedef struct phnls_run_config {
  /* grid */
  int n_y;
  double box_len;
  int n_h;
  int quad_count; /* 0 = 4 n_h */
  /* run */
  int system; /* phnls_system */
  double dt;
  double t_end;
  double mu; /* 1 defocusing, 0 linear */
  int order; /* 2 or 4 */
  int f_average; /* DCR: 0 tensor contraction, 1 period average */
  int m_tau;
  double lambda_list[PHNLS_MAX_LAMBDAS];
  int lambda_count;
  double t_rescaled_end;
  double dt_dcr;
  int outputs;
  uint64_t seed;
  /* initial */
  int initial_kind; /* 0 gaussian, 1 mode, 2 file */
  double amplitude;
  double width;
  double center_y1, center_y2;
  int xi1, xi2;
  int mode_n, mode_k1, mode_k2;
  double noise;
  char initial_file[PHNLS_PATH_MAX];
  /* diagnostics */
  double eps0;
  int diag_every;
  int snapshot_every;
  double cutoff;
  int morawetz;
} phnls_run_config;

typedef struct phnls_diagnostic {
  uint64_t step;
  double t, mass, energy, e0, l2h1, sigma, l4_integrand, morawetz, halfderiv;
} phnls_diagnostic;

typedef struct phnls_profile_row {
  double lambda, t, err_l2h1, err_l4acc, mass_u, mass_w;
} phnls_profile_row;

typedef struct phnls_tensor_report {
  double checksum;
  double max_oracle_error;   /* vs composite Simpson on [-12, 12], step 1e-3 */
  double max_symmetry_error; /* n1 <-> n3 and permutations of Q */
  double max_parity_error;   /* odd-parity Q entries */
  double max_reality_error;  /* relative imaginary part of the resonant sum */
  int resonance_ok;          /* detuning zero on every stored entry */
  size_t entries;
} phnls_tensor_report;

PHNLS_API const char* phnls_version(void);
PHNLS_API const char* phnls_last_error(void);
PHNLS_API const char* phnls_status_string(phnls_status status);

/* configuration */
PHNLS_API phnls_status phnls_config_default(phnls_run_config* out);
PHNLS_API phnls_status phnls_config_parse_file(const char* path, phnls_run_config* out);
PHNLS_API phnls_status phnls_config_parse_string(const char* text, phnls_run_config* out);
/* key is "section.key" or a bare key; value is the textual value. */
PHNLS_API phnls_status phnls_config_set(phnls_run_config* config, const char* key, const char* value);
PHNLS_API phnls_status phnls_config_validate(const phnls_run_config* config);

/* grids */
PHNLS_API phnls_status phnls_grid_create(int n_y, double box_len, int n_h, int quad_count, phnls_grid** out);
PHNLS_API phnls_status phnls_grid_from_config(const phnls_run_config* config, phnls_grid** out);
PHNLS_API void phnls_grid_destroy(phnls_grid* grid);
PHNLS_API phnls_status phnls_grid_info(const phnls_grid* grid, int* n_y, double* box_len, int* n_h, int* quad_count);

/* fields; coefficients are interleaved (re, im) pairs in slice-major order
 * (Hermite index slowest, then k1, then k2) */
PHNLS_API phnls_status phnls_field_zero(const phnls_grid* grid, phnls_field** out);
PHNLS_API phnls_status phnls_field_initial(const phnls_run_config* config, const phnls_grid* grid, phnls_field** out);
PHNLS_API phnls_status phnls_field_clone(const phnls_field* field, phnls_field** out);
PHNLS_API void phnls_field_destroy(phnls_field* field);
PHNLS_API phnls_status phnls_field_size(const phnls_field* field, size_t* count);
PHNLS_API phnls_status phnls_field_info(const phnls_field* field, int* n_y, double* box_len, int* n_h, int* quad_count);
PHNLS_API phnls_status phnls_field_time(const phnls_field* field, double* t);
PHNLS_API phnls_status phnls_field_get_coeffs(const phnls_field* field, double* interleaved, size_t count);
PHNLS_API phnls_status phnls_field_set_coeffs(phnls_field* field, const double* interleaved, size_t count);
PHNLS_API phnls_status phnls_field_read_snapshot(const char* path, int quad_count, phnls_field** out);
PHNLS_API phnls_status phnls_field_write_snapshot(const phnls_field* field, const char* path);

/* diagnostics; tensor may be NULL (the DCR energy is then NaN) */
PHNLS_API phnls_status phnls_diagnose(const phnls_field* field, int system, double mu, const phnls_tensor* tensor,
                                      double cutoff, uint64_t step, phnls_diagnostic* out);

/* tensors */
PHNLS_API phnls_status phnls_tensor_compute(int n_max, int quad_count, int with_quad, phnls_tensor** out);
PHNLS_API void phnls_tensor_destroy(phnls_tensor* tensor);
PHNLS_API phnls_status phnls_tensor_value(const phnls_tensor* tensor, int n1, int n2, int n3, double* out);
PHNLS_API phnls_status phnls_tensor_checksum(const phnls_tensor* tensor, double* out);
PHNLS_API phnls_status phnls_tensor_dump_csv(const phnls_tensor* tensor, const char* path);
PHNLS_API phnls_status phnls_tensor_check(int n_max, phnls_tensor_report* out);

/* simulation. The callback receives each diagnostic row and a borrowed
 * handle to the current state (valid during the call only); returning
 * nonzero stops the run early with PHNLS_OK. The callback fires at step 0,
 * every diag_every or snapshot_every steps, and at the final step. */
typedef int (*phnls_step_callback)(const phnls_diagnostic* diag, const phnls_field* state, int diag_due,
                                   int snapshot_due, void* user);
PHNLS_API phnls_status phnls_simulate(const phnls_run_config* config, const phnls_field* init,
                                      phnls_step_callback callback, void* user, phnls_field** final_state);

/* profile comparison; rows are streamed in (lambda, t) order and the
 * per-lambda maximum errors are written to err (lambda_count entries). */
typedef void (*phnls_profile_callback)(const phnls_profile_row* row, void* user);
PHNLS_API phnls_status phnls_compare_profiles(const phnls_run_config* config, phnls_profile_callback callback,
                                              void* user, double* err);

#ifdef __cplusplus
}
#endif

#endif
