/* C interface to the stable-limits core: heavy-tailed network simulation,
 * infinite-width limit recursions, stable sampling/fitting and the supporting
 * statistics. Handles are opaque; every entry point returns an sl_status and
 * a thread-local human-readable message is kept for the last failure.
 *
 * Reproducibility contract: any routine taking (stream or kind+seed) produces
 * bit-identical output for identical arguments, independent of the worker
 * count (see STABLE_LIMITS_THREADS).
 */
#ifndef STABLE_LIMITS_H
#define STABLE_LIMITS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sl_status {
  SL_OK = 0,
  SL_ERR_DOMAIN = 1,      /* parameter outside its admissible range */
  SL_ERR_SHAPE = 2,       /* dimension or index mismatch */
  SL_ERR_NUMERIC = 3,     /* quadrature / recursion / overflow failure */
  SL_ERR_EMPTY = 4,       /* empty input */
  SL_ERR_DEGENERATE = 5,  /* constant data, zero-mass measure */
  SL_ERR_ENVELOPE = 6,    /* activation rejected by the envelope gate */
  SL_ERR_MOMENT = 7,      /* fractional moment of order >= alpha */
  SL_ERR_RANGE = 8,       /* alpha <= 0.5 density/cdf/fit request */
  SL_ERR_IO = 9,
  SL_ERR_PARSE = 10,
  SL_ERR_UNKNOWN = 99
} sl_status;

/* Message describing the most recent failure on this thread ("" if none). */
const char* sl_last_error(void);

/* Frees strings returned through char** out-parameters. */
void sl_string_free(char* s);

/* ---- uniform streams ------------------------------------------------- */

/* kind: "pseudo" (mt19937_64) or "ld" (seed-scrambled generalized Halton,
 * `dimension` coordinates per point). All variates lie strictly in (0,1). */
typedef struct sl_stream sl_stream;

sl_status sl_stream_new(const char* kind, uint64_t seed, int dimension, sl_stream** out);
sl_status sl_stream_next(sl_stream* stream, size_t count, double* out);
void sl_stream_free(sl_stream* stream);

/* ---- scalar symmetric stable law St(alpha, sigma) --------------------- */

sl_status sl_sample_stable(double alpha, double sigma, sl_stream* stream, size_t count,
                           double* out);
sl_status sl_stable_cf(double alpha, double sigma, double t, double* out);
sl_status sl_stable_pdf(double alpha, double sigma, double x, double* out);
sl_status sl_stable_cdf(double alpha, double sigma, double x, double* out);
sl_status sl_stable_cdf_bulk(double alpha, double sigma, const double* xs, size_t n,
                             double* out);
sl_status sl_frac_abs_moment(double alpha, double sigma, double p, double* out);
/* p = 0 selects the default moment order alpha/2. */
sl_status sl_estimate_scale(const double* xs, size_t n, double alpha, double p, double* out);

/* ---- discrete spectral measures on the unit sphere -------------------- */

typedef struct sl_measure sl_measure;

/* directions: atom-major atoms x dim array (renormalized to unit length). */
sl_status sl_measure_new(int dim, const double* directions, const double* weights,
                         size_t atoms, sl_measure** out);
/* {"dim": k, "atoms": [{"s": [...], "w": ...}, ...]} */
sl_status sl_measure_from_json(const char* text, sl_measure** out);
sl_status sl_measure_to_json(const sl_measure* measure, char** out);
sl_status sl_measure_symmetrize(const sl_measure* measure, sl_measure** out);
int sl_measure_dim(const sl_measure* measure);
size_t sl_measure_atom_count(const sl_measure* measure);
double sl_measure_total_mass(const sl_measure* measure);
sl_status sl_measure_cf(const sl_measure* measure, double alpha, const double* t, double* out);
/* r is 1-based. */
sl_status sl_measure_marginal_scale(const sl_measure* measure, double alpha, int r,
                                    double* out);
/* out is row-major count x dim. */
sl_status sl_measure_sample(const sl_measure* measure, double alpha, sl_stream* stream,
                            size_t count, double* out);
void sl_measure_free(sl_measure* measure);

/* ---- finite-width network simulation ----------------------------------- */

typedef struct sl_net_config {
  int input_dim; /* I  */
  int depth;     /* D  */
  int width;     /* n  */
  double alpha;
  double sigma_w;
  double sigma_b;
  const char* activation; /* "tanh" | "relu" | "identity" */
} sl_net_config;

/* accepted=0 with a non-NULL reason is a verdict, not an error. */
sl_status sl_validate_envelope(const char* activation, double alpha, int* accepted,
                               char** reason);

/* inputs: row-major I x k (column j = input j). out: repeats x units x k.
 * flagged counts repeats containing non-finite values. */
sl_status sl_forward_network(const sl_net_config* config, const double* inputs, int k,
                             const char* stream_kind, uint64_t seed, int layer,
                             const int* units, size_t unit_count, size_t repeats,
                             double* out, size_t* flagged);
/* One unit per repeat drawn from the exact conditional law; out: repeats x k. */
sl_status sl_forward_conditional(const sl_net_config* config, const double* inputs, int k,
                                 const char* stream_kind, uint64_t seed, int layer,
                                 size_t repeats, double* out, size_t* flagged);

/* ---- infinite-width limit recursions ----------------------------------- */

typedef struct sl_recursion sl_recursion;

sl_status sl_sigma_recursion(double alpha, double sigma_w, double sigma_b, const double* x,
                             int input_dim, const char* activation, int depth,
                             size_t mc_samples, const char* stream_kind, uint64_t seed,
                             sl_recursion** out);
sl_status sl_gamma_recursion(double alpha, double sigma_w, double sigma_b,
                             const double* inputs, int input_dim, int k,
                             const char* activation, int depth, size_t mc_samples,
                             const char* stream_kind, uint64_t seed, sl_recursion** out);
int sl_recursion_depth(const sl_recursion* rec);
int sl_recursion_is_multivariate(const sl_recursion* rec);
/* layer is 1-based; stderr_acc may be NULL. */
sl_status sl_recursion_sigma(const sl_recursion* rec, int layer, double* sigma,
                             double* stderr_acc);
sl_status sl_recursion_measure(const sl_recursion* rec, int layer, sl_measure** out);
sl_status sl_recursion_to_json(const sl_recursion* rec, char** out);
void sl_recursion_free(sl_recursion* rec);

/* Gaussian-initialization depth recursion (variances, covariance,
 * correlation); out is row-major depth x 4 = (q_x, q_x', c, rho). */
sl_status sl_gaussian_recursion(double sigma_w2, double sigma_b2, const double* x,
                                const double* x_prime, int input_dim,
                                const char* activation, int depth, int quad_points,
                                double* out);

/* ---- statistics --------------------------------------------------------- */

sl_status sl_ks_stable(const double* xs, size_t n, double alpha, double sigma, double* out);
sl_status sl_ks_normal(const double* xs, size_t n, double mean, double sd, double* out);
sl_status sl_ks_two_sample(const double* a, size_t na, const double* b, size_t nb,
                           double* out);
/* samples: row-major n x dim; t_grid: row-major grid_points x dim;
 * per_point (nullable): grid_points absolute CF errors; out: their max. */
sl_status sl_ecf_distance_measure(const double* samples, size_t n, int dim,
                                  const sl_measure* measure, double alpha,
                                  const double* t_grid, size_t grid_points,
                                  double* per_point, double* out);

typedef struct sl_fit_report {
  double alpha_hat;
  double sigma_hat;
  double log_likelihood;
  int iterations;
  int converged;
} sl_fit_report;

sl_status sl_fit_stable_mle(const double* xs, size_t n, sl_fit_report* out);
sl_status sl_fit_gaussian(const double* xs, size_t n, double* mean, double* sd);

/* counts must hold `bins` entries; chi2/p_value may be NULL. */
sl_status sl_pit_stable(const double* xs, size_t n, double alpha, double sigma, int bins,
                        uint64_t* counts, double* chi2, double* p_value);
sl_status sl_pit_normal(const double* xs, size_t n, double mean, double sd, int bins,
                        uint64_t* counts, double* chi2, double* p_value);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STABLE_LIMITS_H */
