/*
 * degwave: numerical lab for the degenerate wave equation with drift
 *
 *     u_tt = a(x) u_xx + b(x) u_x  on (0, 1),  a(0) = 0,
 *
 * with boundary observation and HUM boundary control at x = 1.
 *
 * Every function returns a dw_status. On failure the message is available
 * from dw_last_error() in the calling thread until the next call. Handles
 * are opaque; release them with the matching *_free function (NULL is
 * accepted). Node arrays have dw_problem_nodes() entries ordered from x = 0
 * to x = 1.
 */
#ifndef DEGWAVE_H
#define DEGWAVE_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(DEGWAVE_BUILDING)
#    define DW_API __declspec(dllexport)
#  else
#    define DW_API __declspec(dllimport)
#  endif
#else
#  define DW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dw_status {
  DW_OK = 0,
  DW_GATE_FAILED = 1,
  DW_ERR_INVALID_ARGUMENT = 2,
  DW_ERR_HYPOTHESIS = 3,
  DW_ERR_MESH_MISMATCH = 4,
  DW_ERR_BOUNDARY = 5,
  DW_ERR_SOLVER_BREAKDOWN = 6,
  DW_ERR_CG_STAGNATION = 7,
  DW_ERR_IO = 8,
  DW_ERR_CONFIG = 9,
  DW_ERR_INTERNAL = 10
} dw_status;

typedef enum dw_degeneracy {
  DW_DEG_NONE = 0,
  DW_DEG_WEAK = 1,
  DW_DEG_STRONG = 2,
  DW_DEG_SUPERCRITICAL = 3
} dw_degeneracy;

typedef struct dw_profile dw_profile;
typedef struct dw_problem dw_problem;
typedef struct dw_hum_result dw_hum_result;

DW_API const char* dw_version(void);
DW_API const char* dw_status_name(dw_status status);
DW_API const char* dw_last_error(void);

/* a = x^K, b = c x^h */
DW_API dw_status dw_profile_power_law(double K, double h, double c, dw_profile** out);
/* CSV with header x,a,b,aprime (any column order). */
DW_API dw_status dw_profile_from_csv(const char* path, dw_profile** out);
DW_API void dw_profile_free(dw_profile* profile);

typedef struct dw_constants {
  double K;      /* sup x|a'|/a over the probe grid */
  double M;      /* max|b| / a(1) */
  double M_inf;  /* max x|b|/a */
  double a_at_1;
  double eta_at_1;
  double eta_min;
  double eta_max;
  double gap;    /* 2 - K - 2M, or 2 - K - 2M_inf when strongly degenerate with K > 1 */
  double T0;     /* +inf when gap <= 0 */
  dw_degeneracy classification;
} dw_constants;

DW_API dw_status dw_profile_constants(const dw_profile* profile, dw_constants* out);
/* upper = 2(2+K+M)T + 4max{1/a(1),1}; lower = T*gap - 8max{1, 1/a(1), K eta_max/(a(1) eta_min)} */
DW_API dw_status dw_inequality_constants(const dw_profile* profile, double T, double* upper,
                                         double* lower);

/* Graded mesh x_i = (i/n)^p, p in [1, 4]. */
DW_API dw_status dw_problem_create(const dw_profile* profile, size_t n_cells, double grading_p,
                                   dw_problem** out);
DW_API void dw_problem_free(dw_problem* problem);
DW_API size_t dw_problem_nodes(const dw_problem* problem);
DW_API dw_status dw_problem_coordinates(const dw_problem* problem, double* x, size_t len);

/* 1/2 (<v,v>_{1/sigma} + int eta y_x^2) */
DW_API dw_status dw_energy(const dw_problem* problem, const double* y, const double* v,
                           size_t len, double* energy);

typedef struct dw_solve_summary {
  size_t steps;
  double dt;
  double E0;
  double max_rel_drift;   /* over the endpoints and every stored state */
  double trace_integral;  /* eta(1) int_0^T y_x(t,1)^2 dt */
  double ratio;           /* trace_integral / E0 */
} dw_solve_summary;

/* Homogeneous Dirichlet solve on [0, T]; dt <= 0 selects T/2048. When trace is
 * not NULL it receives min(trace_len, steps + 1) samples of y_x(t_k, 1). */
DW_API dw_status dw_solve_homogeneous(const dw_problem* problem, const double* y0,
                                      const double* v0, size_t len, double T, double dt,
                                      double* trace, size_t trace_len, dw_solve_summary* out);

typedef struct dw_hum_summary {
  size_t iterations;
  int converged;
  double rel_residual;
  double T0;
  double final_u_norm;
  double final_ut_norm;
  double control_L2_norm;
  double initial_norm;
} dw_hum_summary;

/* Null control of (u0, u1) in time T. DW_ERR_CG_STAGNATION still returns a
 * result handle holding the last iterate. */
DW_API dw_status dw_hum_solve(const dw_problem* problem, const double* u0, const double* u1,
                              size_t len, double T, double dt, double tol, size_t max_iter,
                              dw_hum_result** out);
DW_API void dw_hum_free(dw_hum_result* result);
DW_API dw_status dw_hum_get_summary(const dw_hum_result* result, dw_hum_summary* out);
DW_API size_t dw_hum_control_length(const dw_hum_result* result);
DW_API dw_status dw_hum_control(const dw_hum_result* result, double* f, size_t len);

typedef void (*dw_message_fn)(const char* line, void* user);

/* Runs the experiment file. DW_GATE_FAILED when the experiment's gate fails.
 * out_dir may be NULL to use out.dir from the file. Gate lines and warnings
 * go to sink. */
DW_API dw_status dw_run_config(const char* config_path, const char* out_dir, dw_message_fn sink,
                               void* user);
/* Sends the constants table of the file's coeff.* keys to sink, one line per call. */
DW_API dw_status dw_print_constants(const char* config_path, dw_message_fn sink, void* user);

#ifdef __cplusplus
}
#endif

#endif /* DEGWAVE_H */
