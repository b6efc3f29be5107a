#ifndef TF_DIAGNOSTICS_HPP
#define TF_DIAGNOSTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "entropy.hpp"
#include "forcing.hpp"
#include "spectral.hpp"

namespace tf {

struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double mass_predicted = 0.0;
    double energy = 0.0;       // J = [u]_s^2
    double entropy = 0.0;      // int G_eps(u)
    double dissipation = 0.0;  // int f_eps(u) |dx I(u)|^2
    double seminorm_sp1_sq = 0.0; // [u]_{s+1}^2
    double min_u = 0.0;
    double max_u = 0.0;
    double v_env = 0.0;
    double lambda_env = 0.0;
    double deviation_hs = 0.0;
    double envelope_ratio = 0.0;
};

/** Per-step slack of the one-step energy / entropy inequalities (values
 * <= 0 mean the inequality held with room) and the margin of the
 * quadratic-damping differential inequality for J. */
struct StepSlack {
    double energy = 0.0;
    double entropy = 0.0;
    double j_ineq = 0.0;
};

/** A completed discrete trajectory plus everything the checks need. */
struct Trajectory {
    std::shared_ptr<const FractionalOps> ops;
    EntropyParams ent;
    ForcingSpec forcing;
    double tau = 0.0;
    bool forcing_sample_end = false;
    double c_emb = 0.0; // embedding constant used for envelopes
    double h0 = 0.0;    // (mean u0 - c [u0]_s)^{2-n} |Omega|

    /** Index of states[0] on the global uniform time grid (nonzero after a
     * checkpoint resume). */
    std::size_t step_offset = 0;

    std::vector<double> times;
    std::vector<Field> states;
    std::vector<DiagnosticsRecord> records;
    std::vector<StepSlack> slacks; // slacks[k] covers the step t_k -> t_{k+1}

    // scalars of the t=0 state; preset by a resume, otherwise derived from
    // states[0]
    bool init_preset = false;
    double mass0 = 0.0, mean0 = 0.0, semi0 = 0.0, energy0 = 0.0, entropy0 = 0.0;

    /** Fill records/slacks from states (states and times must be set). */
    void build_diagnostics();
};

struct CheckResult {
    std::string name;
    bool pass = false;
    bool hypothesis_violated = false;
    double margin = 0.0;
    std::string detail;
};

CheckResult check_mass(const Trajectory& tr, double per_step_tol = 1e-10,
                       double cumulative_tol = 1e-9);
CheckResult check_energy_inequality(const Trajectory& tr, double step_slack_tol = 1e-8);
CheckResult check_entropy_inequality(const Trajectory& tr, double step_slack_tol = 1e-8);
/** Trajectory entropy bound with the pointwise-lower-envelope majorant. */
CheckResult check_entropy_trajectory(const Trajectory& tr, double slack_tol = 1e-6);
CheckResult check_envelope_sandwich(const Trajectory& tr);
/** Fraction of steps on which the J differential inequality holds. */
CheckResult check_j_inequality(const Trajectory& tr, double tol = 1e-6,
                               double required_fraction = 0.99);

/** Fit of log deviation against log(1+t) over [t_end*fit_start, t_end]. */
struct DecayFit {
    double exponent = 0.0;
    double r2 = 0.0;
    int points = 0;
};
DecayFit fit_decay(const Trajectory& tr, double fit_start_fraction);
CheckResult check_decay(const Trajectory& tr, double fit_start_fraction = 0.5,
                        double exponent_pass = -0.4);
/** sup over the fit window of (1+t)^{1/2} dev relative increase. */
double scaled_deviation_max_increase(const Trajectory& tr, double fit_start_fraction);

CheckResult check_uniform_bound(const Trajectory& tr);
/** Exponential decay fit against int_{T0}^t v(s)^n ds for constant forcing. */
struct ExpFit {
    double slope = 0.0;
    double r2 = 0.0;
    double t0 = 0.0;
    int points = 0;
};
ExpFit fit_exponential(const Trajectory& tr, double dev_floor = 1e-9);
CheckResult check_exponential(const Trajectory& tr, double r2_pass = 0.95);

/** Residual of the space-time weak form against the test function
 * phi(t,x) = cos^2(pi t / (2 T)) * phi_mode(x), trapezoid in time. */
double weak_form_residual(const Trajectory& tr, int mode);

/** Same residual for the space-constant test function, but with the
 * scheme's own time quadrature, so it vanishes to roundoff. */
double weak_form_mass_residual(const Trajectory& tr);

void write_trajectory_csv(const Trajectory& tr, const std::string& path);

} // namespace tf

#endif
