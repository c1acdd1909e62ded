/* C interface to the nopo library. All functions return a nopo_status; on
 * failure nopo_last_error() describes the problem (per thread). */
#ifndef NOPO_H
#define NOPO_H

#include <stddef.h>
#include <stdint.h>

#if defined(NOPO_BUILDING_LIBRARY)
#define NOPO_API __attribute__((visibility("default")))
#else
#define NOPO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  NOPO_OK = 0,
  NOPO_ERR_ARGUMENT = 1,   /* null pointer or bad enum value */
  NOPO_ERR_DOMAIN = 2,     /* parameters outside the model's domain */
  NOPO_ERR_REGIME = 3,     /* pump outside the requested regime */
  NOPO_ERR_ESTIMATION = 4, /* Monte Carlo estimate failed */
  NOPO_ERR_CONTRACT = 5,
  NOPO_ERR_INTERNAL = 6
} nopo_status;

NOPO_API const char* nopo_version(void);
NOPO_API const char* nopo_last_error(void);
NOPO_API const char* nopo_status_string(nopo_status s);

typedef struct {
  double gamma1, gamma2, gamma3;
  double delta1, delta2;
  double chi;
  double k, E;
  double phi_L, phi_k, phi_chi;
} nopo_params;

NOPO_API void nopo_params_default(nopo_params* p);
/* Symmetric parameters from the scaled pump eps and nonlinearity lambda. */
NOPO_API nopo_status nopo_params_symmetric(double gamma, double delta, double chi, double lambda,
                                           double eps, double gamma3, nopo_params* out);

typedef struct nopo_model nopo_model;

NOPO_API nopo_status nopo_model_create(const nopo_params* p, nopo_model** out);
NOPO_API void nopo_model_destroy(nopo_model* m);

typedef struct {
  double eps, lambda, gamma_tilde;
  double eps_th, E_th, P_th;
  int p_th_literal, threshold_known, adiabatic_ok;
  int locking_feasible, symmetric;
} nopo_scales;

NOPO_API nopo_status nopo_model_scales(const nopo_model* m, nopo_scales* out);
NOPO_API nopo_status nopo_critical_points(const nopo_model* m, double* eps_cr_plus,
                                          double* eps_cr_minus);

typedef enum { NOPO_BRANCH_PLUS = 0, NOPO_BRANCH_MINUS = 1, NOPO_BRANCH_DEFAULT = 2 } nopo_branch;

typedef struct {
  int branch;
  double eps;
  double n10, n20;
  double phi10, phi20;
  double phase_sum, phase_diff;
  int below_critical, locked, stable, stability_extrapolated;
  double eig_re[4], eig_im[4];
} nopo_steady;

NOPO_API nopo_status nopo_steady_state(const nopo_model* m, double eps, int branch,
                                       nopo_steady* out);
/* rates[0] = pump input, rates[1], rates[2] = subharmonic outputs */
NOPO_API nopo_status nopo_output_rates(const nopo_model* m, double n10, double n20,
                                       double rates[3]);

typedef enum {
  NOPO_REGIME_MOMENTS = 0,
  NOPO_REGIME_UNITARY = 1,
  NOPO_REGIME_BELOW = 2,
  NOPO_REGIME_ABOVE = 3,
  NOPO_REGIME_AUTO = 4
} nopo_regime;

typedef struct {
  double V, R, V_plus, V_minus, product;
  int inseparable, strong_epr, linearization_unreliable, degenerate;
  int regime;
  double theta1, theta2, sum, diff;
} nopo_variance;

typedef struct {
  double n;
  double aa_re, aa_im;
  double a1sq_re, a1sq_im;
  double cross_re, cross_im;
} nopo_moments;

/* regime: BELOW, ABOVE or AUTO. */
NOPO_API nopo_status nopo_variance_steady(const nopo_model* m, int regime, double eps,
                                          double delta_theta, nopo_variance* out);
NOPO_API nopo_status nopo_variance_from_moments(const nopo_moments* mo, double sum, double diff,
                                                nopo_variance* out);
NOPO_API nopo_status nopo_moments_below(const nopo_model* m, double eps, nopo_moments* out);
NOPO_API nopo_status nopo_mean_photon_below(const nopo_model* m, double eps, double* n);
NOPO_API nopo_status nopo_unitary_variance(double chi, double eps, double t, double sigma_theta,
                                           double* V);
NOPO_API nopo_status nopo_unitary_minimum(double chi, double eps, double* t_min, double* V_min,
                                          double* period);

typedef struct {
  double dt, t_max;
  uint64_t n_traj;
  double burn_in;
  uint64_t seed;
  double divergence_bound;
  double sample_interval;
  unsigned workers; /* 0: all hardware threads */
  int noise;
  double max_discard_fraction;
  double initial[8]; /* re/im of alpha1, alpha2, beta1, beta2 */
} nopo_sim_config;

NOPO_API void nopo_sim_config_default(nopo_sim_config* c);

typedef struct {
  char label[32];
  double mean_re, mean_im;
  double se_re, se_im, std_error;
  uint64_t n_effective;
  double discard_fraction;
} nopo_estimate;

/* specs: words such as "b1a1", "a1^2"; out must hold n_specs entries. */
NOPO_API nopo_status nopo_ensemble_moments(const nopo_model* m, double eps,
                                           const nopo_sim_config* c, const char* const* specs,
                                           size_t n_specs, nopo_estimate* out);

typedef struct nopo_histograms nopo_histograms;

typedef enum { NOPO_HIST_DIFF = 0, NOPO_HIST_SUM = 1, NOPO_HIST_ABS1 = 2 } nopo_hist_kind;

NOPO_API nopo_status nopo_phase_histogram(const nopo_model* m, double eps,
                                          const nopo_sim_config* c, size_t bins,
                                          nopo_histograms** out);
NOPO_API void nopo_histograms_destroy(nopo_histograms* h);
NOPO_API size_t nopo_histograms_bins(const nopo_histograms* h);
NOPO_API nopo_status nopo_histograms_range(const nopo_histograms* h, int kind, double* lo,
                                           double* hi);
NOPO_API nopo_status nopo_histograms_counts(const nopo_histograms* h, int kind, uint64_t* counts,
                                            size_t n);
NOPO_API nopo_status nopo_histograms_mass_within(const nopo_histograms* h, int kind,
                                                 double center, double half_width, double period,
                                                 double* fraction);
NOPO_API nopo_status nopo_histograms_samples(const nopo_histograms* h, uint64_t* samples,
                                             uint64_t* diverged);
/* Empty string when there is nothing to report. */
NOPO_API const char* nopo_histograms_note(const nopo_histograms* h);

#ifdef __cplusplus
}
#endif

#endif
