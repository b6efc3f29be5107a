/* C interface of the thin-film fractional-diffusion library.
 *
 * All objects are opaque handles; every function returns a tf_status and
 * reports results through out-parameters. tf_last_error() holds a
 * human-readable message for the most recent failure on the calling
 * thread. */
#ifndef THINFILM_H
#define THINFILM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    TF_OK = 0,
    TF_ERR_INVALID_ARGUMENT = 1,
    TF_ERR_IO = 2,
    TF_ERR_CONFIG = 3,
    TF_ERR_SOLVER = 4,
    TF_ERR_CHECKS_FAILED = 5,
    TF_ERR_INTERNAL = 6
} tf_status;

const char* tf_status_name(tf_status status);
const char* tf_last_error(void);

/* --- grids and fields ------------------------------------------------ */

typedef struct tf_grid tf_grid;
typedef struct tf_field tf_field;
typedef struct tf_ops tf_ops;

tf_status tf_grid_create(double a, double b, int n, tf_grid** out);
void tf_grid_destroy(tf_grid* g);
int tf_grid_size(const tf_grid* g);
/* Fills nodes[0..n-1] with the midpoint collocation nodes. */
tf_status tf_grid_nodes(const tf_grid* g, double* nodes);

tf_status tf_field_from_nodal(const tf_grid* g, const double* values, tf_field** out);
tf_status tf_field_from_coeff(const tf_grid* g, const double* coeff, tf_field** out);
tf_status tf_field_nodal(const tf_field* f, double* out);
tf_status tf_field_coeff(const tf_field* f, double* out);
tf_status tf_field_mass(const tf_field* f, double* out);
void tf_field_destroy(tf_field* f);

/* --- spectral operators for a fixed order s in (0,1) ----------------- */

tf_status tf_ops_create(const tf_grid* g, double s, tf_ops** out);
void tf_ops_destroy(tf_ops* o);
/* I(f) = -(-Laplace)^s f. */
tf_status tf_ops_apply(const tf_ops* o, const tf_field* f, tf_field** out);
/* Solve (-Laplace)^s u = g, mean-free g, mean-zero u. */
tf_status tf_ops_solve(const tf_ops* o, const tf_field* g, tf_field** out);
tf_status tf_ops_seminorm_sq(const tf_ops* o, const tf_field* f, double sigma, double* out);

/* --- scenario runs --------------------------------------------------- */

/* Runs the scenario described by the config file; writes trajectory.csv,
 * verdict.json, manifest.json and checkpoint.txt into output_dir (pass
 * NULL to skip file output). *checks_failed receives the number of failed
 * non-hypothesis-violated checks. Returns TF_ERR_CHECKS_FAILED when that
 * count is nonzero. */
tf_status tf_run_scenario(const char* config_path, const char* output_dir, int* checks_failed);

/* Continues a checkpointed run to its configured end time. */
tf_status tf_resume(const char* checkpoint_path, const char* output_dir, int* checks_failed);

/* Randomized verification of the auxiliary inequalities; writes a JSON
 * report when report_path is non-NULL. Returns TF_ERR_CHECKS_FAILED if
 * any family fails. */
tf_status tf_verify_lemmas(unsigned long long seed, int draws, const char* report_path);

/* Comparison-ODE envelope table: integrates X' = alpha(t) X^lambda +
 * beta X^p by RK4 and writes (t, x_rk4, envelope) rows. sigma > 0 selects
 * the decaying coefficient alpha(t) = a1/(1+t)^sigma, sigma == 0 the
 * constant coefficient a1. */
tf_status tf_ode_envelope_csv(double lambda, double p, double beta, double a1, double sigma,
                              double x0, double t_end, double dt, const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif
