/* C interface for the tcsim shared library.
 *
 * All objects are opaque handles created and destroyed through these
 * functions. Calls return tcsim_status; on any nonzero status the thread-local
 * message from tcsim_last_error() describes the failure. Strings returned
 * through char** are heap-allocated and must be released with
 * tcsim_string_free().
 *
 * Random streams are addressed by (root seed, lane label, path index); the
 * same key always reproduces the same draws.
 */
#ifndef TCSIM_H
#define TCSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tcsim_status {
  TCSIM_OK = 0,
  TCSIM_ERR_CONFIG = 2,   /* bad ids, bad configuration, API misuse */
  TCSIM_ERR_DOMAIN = 3,   /* inputs outside the mathematical domain */
  TCSIM_ERR_ASSERT = 4,   /* --assert style check failed (outputs still valid) */
  TCSIM_ERR_INTERNAL = 5
} tcsim_status;

typedef struct tcsim_path tcsim_path;
typedef struct tcsim_timechange tcsim_timechange;
typedef struct tcsim_functional tcsim_functional;
typedef struct tcsim_breakdown tcsim_breakdown;

const char* tcsim_version(void);
const char* tcsim_last_error(void);
void tcsim_string_free(char* s);

/* ------------------------------ paths -------------------------------- */

/* times strictly increasing from 0 to 1; piecewise_linear = 0 for the cadlag
 * step kind. */
tcsim_status tcsim_path_new(const double* times, const double* values, size_t len,
                            int piecewise_linear, tcsim_path** out);
void tcsim_path_free(tcsim_path* p);
size_t tcsim_path_size(const tcsim_path* p);
tcsim_status tcsim_path_data(const tcsim_path* p, const double** times,
                             const double** values, int* piecewise_linear);
tcsim_status tcsim_path_eval(const tcsim_path* p, double t, double* out);
tcsim_status tcsim_path_sup_norm(const tcsim_path* p, double* out);
tcsim_status tcsim_path_integral(const tcsim_path* p, double* out);
tcsim_status tcsim_path_combine(double a, const tcsim_path* p, double b,
                                const tcsim_path* q, tcsim_path** out);
tcsim_status tcsim_path_to_csv(const tcsim_path* p, char** out);
tcsim_status tcsim_path_from_csv(const char* csv, tcsim_path** out);
tcsim_status tcsim_path_to_json(const tcsim_path* p, char** out);
tcsim_status tcsim_path_from_json(const char* json, tcsim_path** out);

/* --------------------------- time changes ----------------------------- */

/* spec: "identity" | "linear:<c>" | "power:<alpha>" */
tcsim_status tcsim_timechange_parse(const char* spec, tcsim_timechange** out);
tcsim_status tcsim_timechange_tabulated(const tcsim_path* table, tcsim_timechange** out);
void tcsim_timechange_free(tcsim_timechange* s);
tcsim_status tcsim_timechange_eval(const tcsim_timechange* s, double t, double* out);
tcsim_status tcsim_timechange_total(const tcsim_timechange* s, double* out);
tcsim_status tcsim_timechange_inverse(const tcsim_timechange* s, double y, double* out);
tcsim_status tcsim_uniform_distance(const tcsim_timechange* s,
                                    const tcsim_timechange* s2, double* out);

/* kind: "R1" | "Rm1" | "R1_limit" | "In" | "I_limit". Returns the tabulated
 * integral path (signed kinds may be non-monotone). */
tcsim_status tcsim_integrated_rate(const tcsim_path* x, double nu1, double nu2,
                                   const char* kind, int64_t n, tcsim_path** out);

/* ---------------------------- functionals ----------------------------- */

/* id: "<outer>_<inner>", outer in {sin,cos,cubic,quad,lin}, inner in
 * {avg, eval@<t>, wsum[t:a,...]} */
tcsim_status tcsim_functional_parse(const char* id, tcsim_functional** out);
void tcsim_functional_free(tcsim_functional* g);
tcsim_status tcsim_functional_eval(const tcsim_functional* g, const tcsim_path* p,
                                   double* out);
/* order 1 ignores k; order 2 requires it. */
tcsim_status tcsim_functional_diff(const tcsim_functional* g, const tcsim_path* p,
                                   const tcsim_path* h, const tcsim_path* k, int order,
                                   double* out);
tcsim_status tcsim_functional_m_norm_bound(const tcsim_functional* g, double* out);
tcsim_status tcsim_frechet_check(const tcsim_functional* g, int trials, uint64_t seed,
                                 char** json_report);

/* ------------------------------ samplers ------------------------------ */

tcsim_status tcsim_sim_scaled_rw(int64_t n, const char* step_dist,
                                 const tcsim_timechange* s, uint64_t root,
                                 const char* lane, uint64_t index, tcsim_path** out);
tcsim_status tcsim_sim_discretized_bm(int64_t n, const tcsim_timechange* s,
                                      uint64_t root, const char* lane, uint64_t index,
                                      tcsim_path** out);
tcsim_status tcsim_sim_time_changed_bm(const tcsim_timechange* s, const double* grid,
                                       size_t grid_len, uint64_t root, const char* lane,
                                       uint64_t index, tcsim_path** out);
tcsim_status tcsim_sim_compensated_poisson(int64_t n, const tcsim_timechange* Sn,
                                           uint64_t root, const char* lane,
                                           uint64_t index, tcsim_path** out);
tcsim_status tcsim_sim_moran(int64_t n, double nu1, double nu2, double x0,
                             uint64_t root, const char* lane, uint64_t index,
                             tcsim_path** out);
tcsim_status tcsim_sim_wright_fisher(double nu1, double nu2, double x0, double dt,
                                     uint64_t root, const char* lane, uint64_t index,
                                     tcsim_path** out);
tcsim_status tcsim_sim_mn(int64_t n, double nu1, double nu2, double x0, uint64_t root,
                          const char* lane, uint64_t index, tcsim_path** out);
tcsim_status tcsim_sim_m(double nu1, double nu2, double x0, double dt, uint64_t root,
                         const char* lane, uint64_t index, tcsim_path** out);
/* out_values must hold grid_len doubles. */
tcsim_status tcsim_lookdown_marginals(const tcsim_path* x, int64_t n,
                                      const double* grid, size_t grid_len,
                                      uint64_t root, const char* lane, uint64_t index,
                                      double* out_values);

/* ------------------------------- bounds ------------------------------- */

tcsim_status tcsim_bound_thm1(int64_t n, double s1, double m3, double gm,
                              tcsim_breakdown** out);
tcsim_status tcsim_bound_thm2(int64_t n, double S1, double Sn1, double dist, double gm,
                              tcsim_breakdown** out);
tcsim_status tcsim_bound_thm3(int64_t n, double nu1, double nu2, double gm,
                              int simplified, tcsim_breakdown** out);
void tcsim_breakdown_free(tcsim_breakdown* b);
tcsim_status tcsim_breakdown_total(const tcsim_breakdown* b, double* out);
size_t tcsim_breakdown_terms(const tcsim_breakdown* b);
tcsim_status tcsim_breakdown_term(const tcsim_breakdown* b, size_t i,
                                  const char** label, double* value);
tcsim_status tcsim_breakdown_to_json(const tcsim_breakdown* b, char** out);

tcsim_status tcsim_bm_modulus_bounds(int64_t n, double s1, double out_k[3]);
tcsim_status tcsim_doob_l3_bound(double s1, double* out);
tcsim_status tcsim_poisson_abs3_moment(double* out);
tcsim_status tcsim_min_holding_prob(double lambda, double* out);

/* ------------------------------- stein -------------------------------- */

tcsim_status tcsim_ou_semigroup(const tcsim_functional* g, const tcsim_path* w,
                                double u, int64_t n, const tcsim_timechange* s,
                                int64_t samples, uint64_t root, const char* lane,
                                uint64_t index, double* value, double* se);
tcsim_status tcsim_generator_apply(const tcsim_functional* g, const tcsim_path* w,
                                   int64_t n, const tcsim_timechange* s, double* out);
tcsim_status tcsim_stein_solution(const tcsim_functional* g, const tcsim_path* w,
                                  int64_t n, const tcsim_timechange* s, double u_max,
                                  int nodes, int64_t samples, uint64_t root,
                                  const char* lane, uint64_t index, double* value,
                                  double* error);
/* target: "discretized_bm" | "scaled_rw:<dist>" */
tcsim_status tcsim_stein_identity_residual(const tcsim_functional* g,
                                           const char* target, int64_t n,
                                           const tcsim_timechange* s, int64_t samples,
                                           uint64_t root, const char* lane,
                                           uint64_t index, double* value, double* se);

/* ------------------------------ harness ------------------------------- */

/* subcommand: "simulate" | "bound" | "gap" | "rate" | "stein-check" |
 * "holding-prob". config_text: flat key=value lines ('#' comments), the same
 * schema the CLI accepts. On TCSIM_ERR_ASSERT the outputs are still filled. */
tcsim_status tcsim_run(const char* subcommand, const char* config_text, char** output,
                       char** manifest);

#ifdef __cplusplus
}
#endif

#endif /* TCSIM_H */
