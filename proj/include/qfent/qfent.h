#ifndef QFENT_QFENT_H
#define QFENT_QFENT_H

/*
 * C interface to the qfent library: entropy densities of shift-invariant
 * quasi-free fermionic states and the minimax schemes that estimate the von
 * Neumann density from integer-order Renyi densities.
 *
 * Every function returns a qfent_status. On failure the message of the last
 * error on the calling thread is available from qfent_last_error().
 * Entropy orders are passed as doubles: 1.0 is the von Neumann order and
 * INFINITY the min-entropy order.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(QFENT_BUILDING_LIBRARY)
#    define QFENT_API __declspec(dllexport)
#  else
#    define QFENT_API __declspec(dllimport)
#  endif
#else
#  define QFENT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qfent_status {
  QFENT_OK = 0,
  QFENT_ERR_INVALID_ARGUMENT = 1,
  QFENT_ERR_CONFIG = 2,
  QFENT_ERR_IO = 3,
  QFENT_ERR_RANGE = 4,
  QFENT_ERR_QUADRATURE = 5,
  QFENT_ERR_CONVERGENCE = 6,
  QFENT_ERR_EIGENSOLVER = 7,
  QFENT_ERR_ORACLE = 8,
  QFENT_ERR_BUFFER_TOO_SMALL = 9,
  QFENT_ERR_INTERNAL = 10
} qfent_status;

/* Outputs with a capacity argument fail with QFENT_ERR_BUFFER_TOO_SMALL when it
 * is short. Functions returning a bare double return NaN on invalid input and
 * set the last-error message. */

typedef struct qfent_symbol qfent_symbol;
typedef struct qfent_scheme qfent_scheme;

QFENT_API const char* qfent_version(void);
QFENT_API const char* qfent_status_string(qfent_status status);
/* Message of the last failure on this thread ("" if none). */
QFENT_API const char* qfent_last_error(void);
/* Residual/error estimate carried by the last numerical failure, NaN otherwise. */
QFENT_API double qfent_last_error_estimate(void);

/* "1", "inf"/"infinity" or a positive number. */
QFENT_API qfent_status qfent_parse_order(const char* token, double* alpha);

typedef struct qfent_quad_spec {
  int initial_panels;
  double abs_tol;
  int max_depth;
  size_t max_panels;
} qfent_quad_spec;

QFENT_API qfent_quad_spec qfent_quad_spec_default(void);

/* ---- symbols ---------------------------------------------------------- */

typedef double (*qfent_symbol_fn)(const double* x, int dimension, void* user);

QFENT_API qfent_status qfent_symbol_load(const char* path, qfent_symbol** out);
/* base_dir resolves relative `table = ...` paths; may be NULL. */
QFENT_API qfent_status qfent_symbol_parse(const char* text, const char* base_dir, qfent_symbol** out);
QFENT_API qfent_status qfent_symbol_constant(int dimension, double value, qfent_symbol** out);
QFENT_API qfent_status qfent_symbol_cosine_thermal(int dimension, double beta, double mu, double hopping,
                                                   qfent_symbol** out);
/* q = 1/(1+exp(beta (dispersion(x) - mu))). `user` must outlive the symbol. */
QFENT_API qfent_status qfent_symbol_thermal(int dimension, qfent_symbol_fn dispersion, void* user, double beta,
                                            double mu, qfent_symbol** out);
QFENT_API qfent_status qfent_symbol_closed_form(int dimension, qfent_symbol_fn f, void* user, const char* label,
                                                qfent_symbol** out);
/* (2 cutoff + 1)^dimension coefficients in row-major order, first index slowest. */
QFENT_API qfent_status qfent_symbol_from_fourier(int dimension, int cutoff, const double* re, const double* im,
                                                 const char* label, qfent_symbol** out);
QFENT_API qfent_status qfent_symbol_from_grid(int dimension, int n_per_dim, const double* samples, size_t count,
                                              const char* label, qfent_symbol** out);
QFENT_API void qfent_symbol_free(qfent_symbol* q);

QFENT_API int qfent_symbol_dimension(const qfent_symbol* q);
QFENT_API const char* qfent_symbol_label(const qfent_symbol* q);
QFENT_API qfent_status qfent_symbol_eval(const qfent_symbol* q, const double* x, double* value);

typedef enum qfent_rearrangement {
  QFENT_TRANSLATION = 0,
  QFENT_REFLECTION = 1,
  QFENT_PERMUTATION = 2
} qfent_rearrangement;

/* shift: dimension entries (translation); perm: dimension entries (permutation). */
QFENT_API qfent_status qfent_symbol_rearrange(const qfent_symbol* q, qfent_rearrangement kind, const double* shift,
                                              const int* perm, qfent_symbol** out);

/* re/im receive (2 cutoff + 1)^dimension entries. */
QFENT_API qfent_status qfent_fourier_coefficients(const qfent_symbol* q, int cutoff, const qfent_quad_spec* spec,
                                                  double* re, double* im, size_t capacity, double* quad_error);
QFENT_API qfent_status qfent_fourier_write_csv(const qfent_symbol* q, int cutoff, const qfent_quad_spec* spec,
                                               const char* path);

typedef enum qfent_boundary { QFENT_OPEN = 0, QFENT_PERIODIC = 1 } qfent_boundary;

/* Ascending eigenvalues of the L^dimension box restriction. */
QFENT_API qfent_status qfent_restrict_to_box(const qfent_symbol* q, int L, const qfent_quad_spec* spec,
                                             qfent_boundary boundary, double* eigenvalues, size_t capacity,
                                             size_t* count, double* max_clamp);

QFENT_API qfent_status qfent_distribution_function(const qfent_symbol* q, int samples, const double* levels,
                                                   size_t count, double* values);
QFENT_API qfent_status qfent_kernel_measure(const qfent_symbol* q, int samples, double eps, double* measure);

/* ---- entropy densities ------------------------------------------------ */

typedef struct qfent_entropy {
  double alpha;
  double value;
  double quad_error;
} qfent_entropy;

QFENT_API qfent_status qfent_renyi_density(const qfent_symbol* q, double alpha, const qfent_quad_spec* spec,
                                           qfent_entropy* out);
QFENT_API double qfent_renyi_term(double q, double alpha);
QFENT_API double qfent_log_min_ratio(double q);
QFENT_API double qfent_h_of_value(double q);
QFENT_API double qfent_g_term(double q, double alpha);

typedef enum qfent_g_form { QFENT_G_DEFINING = 0, QFENT_G_INTEGRAL = 1 } qfent_g_form;

QFENT_API qfent_status qfent_g_function(const qfent_symbol* q, double alpha, const qfent_quad_spec* spec,
                                        qfent_g_form form, qfent_entropy* out);

typedef struct qfent_g_check {
  double alpha;
  double defining;
  double integral;
  double difference;
  double tolerance;
  int consistent;
} qfent_g_check;

QFENT_API qfent_status qfent_g_consistency(const qfent_symbol* q, double alpha, const qfent_quad_spec* spec,
                                           qfent_g_check* out);
QFENT_API qfent_status qfent_h_function(const qfent_symbol* q, const double* x, double* h);

/* ---- Laplace representation ------------------------------------------- */

QFENT_API double qfent_step_k(double t);
QFENT_API double qfent_laplace_of_k(double s);
QFENT_API double qfent_kernel_term(double q, double t);
QFENT_API qfent_status qfent_g_kernel_asymptote(const qfent_symbol* q, int samples, double* value);
QFENT_API qfent_status qfent_g_kernel(const qfent_symbol* q, double t, const qfent_quad_spec* spec, double* value,
                                      double* quad_error);
QFENT_API qfent_status qfent_g_kernel_laplace(const qfent_symbol* q, double alpha, double tol,
                                              const qfent_quad_spec* spec, double* value, double* error);

typedef struct qfent_monotonicity_order {
  int order;
  double min_value;
  double argmin;
  double tolerance;
  int pass;
} qfent_monotonicity_order;

typedef double (*qfent_real_fn)(double x, void* user);

/* orders receives max_order + 1 entries (n = 0 .. max_order). */
QFENT_API qfent_status qfent_check_monotonicity(qfent_real_fn f, void* user, double lo, double hi, double step,
                                                int max_order, double noise, qfent_monotonicity_order* orders,
                                                int* pass, int* first_failure);
QFENT_API qfent_status qfent_check_g_monotonicity(const qfent_symbol* q, double lo, double hi, double step,
                                                  int max_order, const qfent_quad_spec* spec,
                                                  qfent_monotonicity_order* orders, int* pass,
                                                  int* first_failure);

/* ---- approximation schemes -------------------------------------------- */

typedef enum qfent_scheme_kind { QFENT_PLAIN = 0, QFENT_SHIFTED = 1, QFENT_CONTROLLED = 2 } qfent_scheme_kind;

typedef struct qfent_solver_options {
  double domain_cap;
  int grid_points;
  int max_iterations;
  double level_tol;
  double alpha_lo;
  double alpha_hi;
  double alpha_tol;
} qfent_solver_options;

QFENT_API qfent_solver_options qfent_solver_options_default(void);
QFENT_API qfent_status qfent_parse_scheme_kind(const char* name, qfent_scheme_kind* kind);

QFENT_API double qfent_basis(double alpha, double t);
QFENT_API double qfent_basis_ratio(double m, double alpha, double t);

/* opt may be NULL for defaults. n in 1..10. */
QFENT_API qfent_status qfent_scheme_solve(qfent_scheme_kind kind, int n, const qfent_solver_options* opt,
                                          qfent_scheme** out);
QFENT_API qfent_status qfent_scheme_solve_controlled_at(int n, double alpha, const qfent_solver_options* opt,
                                                        qfent_scheme** out);
QFENT_API void qfent_scheme_free(qfent_scheme* s);

typedef struct qfent_scheme_info {
  qfent_scheme_kind kind;
  int n;
  int has_c0;
  double c0;
  int has_alpha;
  double alpha;
  double residual;
  int has_bound;
  double certified_bound;
  double spread;
  double condition;
  double domain_cap;
  double tail_bound;
  int iterations;
  size_t extrema_count;
} qfent_scheme_info;

QFENT_API qfent_status qfent_scheme_get_info(const qfent_scheme* s, qfent_scheme_info* info);
/* gamma[i] multiplies s(i + 2); capacity >= n. */
QFENT_API qfent_status qfent_scheme_gamma(const qfent_scheme* s, double* gamma, size_t capacity);
QFENT_API qfent_status qfent_scheme_extrema(const qfent_scheme* s, double* t, double* r, size_t capacity);
QFENT_API const char* qfent_scheme_method(const qfent_scheme* s);

QFENT_API qfent_status qfent_scheme_residual(const qfent_scheme* s, double t, double* raw, double* normed);

/* raw = f_1 - sum gamma_i f_{i+1}; normed divides by f_alpha (controlled);
 * scaled multiplies normed by log 2 (controlled). Any output may be NULL. */
QFENT_API qfent_status qfent_scheme_profile(const qfent_scheme* s, const double* t, size_t count, double* raw,
                                            double* normed, double* scaled);

typedef struct qfent_certificate {
  int alternations;
  double max_abs;
  double min_peak;
  double spread;
  int pass;
} qfent_certificate;

QFENT_API qfent_status qfent_scheme_certify(const qfent_scheme* s, int points, double rel_tol,
                                            qfent_certificate* out);

typedef struct qfent_application {
  double estimate;
  double true_value;
  double true_error;
  double quad_error;
  int has_bound;
  double bound;
  int within_bound;
} qfent_application;

/* renyi (may be NULL) receives s(2) .. s(n+1). */
QFENT_API qfent_status qfent_scheme_apply(const qfent_scheme* s, const qfent_symbol* q, const qfent_quad_spec* spec,
                                          qfent_application* out, qfent_entropy* renyi, size_t capacity);

/* ---- finite boxes ----------------------------------------------------- */

QFENT_API qfent_status qfent_local_renyi(const double* eigenvalues, size_t count, double alpha, double* value);

typedef struct qfent_convergence_row {
  int L;
  double per_site;
  double gap;
} qfent_convergence_row;

typedef struct qfent_convergence {
  qfent_entropy density;
  double extrapolated;
  double extrapolation_error;
  double threshold;
  int decreasing;
  int pass;
} qfent_convergence;

/* rows receives one entry per distinct L, ascending. */
QFENT_API qfent_status qfent_density_convergence(const qfent_symbol* q, double alpha, const int* L, size_t count,
                                                 const qfent_quad_spec* spec, double threshold,
                                                 qfent_boundary boundary, qfent_convergence_row* rows,
                                                 qfent_convergence* summary);

#define QFENT_ORACLE_MAX_SITES 4
#define QFENT_ORACLE_MAX_ORDERS 8

typedef struct qfent_oracle_comparison {
  double alpha;
  double from_rho;
  double from_modes;
  double difference;
} qfent_oracle_comparison;

typedef struct qfent_oracle_report {
  int sites;
  double mode_eigenvalues[QFENT_ORACLE_MAX_SITES];
  double rho_spectrum[1 << QFENT_ORACLE_MAX_SITES];
  double product_spectrum[1 << QFENT_ORACLE_MAX_SITES];
  double spectrum_deviation;
  double trace;
  double min_eigenvalue;
  double hermiticity_defect;
  int comparison_count;
  qfent_oracle_comparison comparisons[QFENT_ORACLE_MAX_ORDERS];
  double tolerance;
  int pass;
} qfent_oracle_report;

/* alphas may be NULL (orders 2, 3, 1). n in 1..4. */
QFENT_API qfent_status qfent_wick_oracle(const qfent_symbol* q, int n, const qfent_quad_spec* spec,
                                         const double* alphas, size_t order_count, double tol,
                                         qfent_oracle_report* out);

#ifdef __cplusplus
}
#endif

#endif
