/* C interface to the lattice-permutation / dimer verification engine.
 *
 * All functions return an error code (LP_OK on success).  Exact rationals
 * cross the boundary as "p/q" strings; bignum counts as decimal strings.
 * Every char* output is heap-allocated and must be released with lp_free.
 * Torus handles are opaque and must be released with lp_torus_destroy.
 */
#ifndef LATPERM_H
#define LATPERM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  LP_OK = 0,
  LP_EINVAL = 1,       /* bad argument / unsupported parameters */
  LP_EINTERNAL = 2,    /* internal invariant violation */
  LP_ECHECKFAIL = 3    /* a verification ran and reported failure */
};

/* Human-readable message for the most recent error on this thread. */
const char* lp_last_error(void);

void lp_free(void* p);

/* ---- torus ---- */
typedef struct lp_torus lp_torus;
int lp_torus_create(int d, long L, lp_torus** out);
void lp_torus_destroy(lp_torus* t);
int lp_torus_sites(const lp_torus* t, long* out);
/* Site id of the origin (0, ..., 0). */
int lp_torus_origin(const lp_torus* t, long* out);

/* ---- dimer ---- */
/* method: 0 = backtracking, 1 = transfer, 2 = permanent. */
int lp_dimer_count(const lp_torus* t, const long* removed, long n_removed,
                   int method, char** out_decimal);
/* CSV table x_1,..,x_d,value of Xi_L over all sites (exact rationals). */
int lp_dimer_xi_csv(int d, long L, char** out_csv);

/* ---- permutation model ---- */
int lp_perm_partition(const lp_torus* t, int N, const char* rho, char** out_rat);
int lp_perm_two_point(const lp_torus* t, int N, const char* rho, long x,
                      long y, char** out_rat);
/* CSV table of G_{L,N,rho}(o, x) over all sites. */
int lp_perm_g_csv(const lp_torus* t, int N, const char* rho, char** out_csv);
/* CSV table of the law of the endpoint of the open path. */
int lp_perm_target_law_csv(const lp_torus* t, int N, const char* rho,
                           char** out_csv);

/* ---- random-path model (d = 1 only) ----
 * check: "components" | "expansion" | "chessboard" | "rp" | "key".
 * For "key", param is rho; otherwise param is lambda.  count seeded random
 * inputs are drawn where applicable.  *out_ok = 1 pass / 0 fail; on fail the
 * return code is LP_ECHECKFAIL and *out_detail explains. */
int lp_pathweb_verify(int d, long L, int N, const char* param,
                      const char* check, uint64_t seed, long count,
                      int* out_ok, char** out_detail);

/* ---- spectral ----
 * check: "hf" | "parity" | "modediff" | "psi" | "infrared". */
int lp_spectral_check(const lp_torus* t, int N, const char* rho,
                      const char* check, double tol, int* out_ok,
                      char** out_detail);
int lp_spectral_il(int d, long L, double* out);
int lp_spectral_upsilon_csv(int d, long L, char** out_csv);
/* CSV k_1,..,k_d,re,im of the transform of G_{L,N,rho}. */
int lp_spectral_spectrum_csv(const lp_torus* t, int N, const char* rho,
                             char** out_csv);

/* ---- random walk ---- */
int lp_rwalk_quadrature(int d, long grid_m, double* out_value, double* out_err);
int lp_rwalk_montecarlo(int d, long trials, long max_steps, uint64_t seed,
                        double* out_value, double* out_stderr,
                        double* out_tail_bias);
int lp_rwalk_partial_sum(int d, int m, long grid_m, double* out_lhs,
                         double* out_rhs, int* out_ok);

/* ---- worm Monte Carlo ---- */
/* CSV x_1,..,x_d,value,stderr of the Xi estimate. */
int lp_worm_xi_csv(int d, long L, long sweeps, long therm, uint64_t seed,
                   char** out_csv);
/* Axis decay profile: fitted power-law exponent and min over n <= L/4. */
int lp_worm_profile(int d, long L, long sweeps, long therm, uint64_t seed,
                    double* out_exponent, double* out_min_value,
                    double* out_xi_e1);

#ifdef __cplusplus
}
#endif

#endif /* LATPERM_H */
