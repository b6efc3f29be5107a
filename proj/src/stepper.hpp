#ifndef TF_STEPPER_HPP
#define TF_STEPPER_HPP

#include <memory>

#include "entropy.hpp"
#include "forcing.hpp"
#include "spectral.hpp"

namespace tf {

struct StepperOptions {
    double tau = 1e-2;
    double tau_min = 1e-6;
    double newton_tol = 1e-12;
    /** Residual level still accepted when the iteration stalls at its
     * roundoff floor (the stiff flux term amplifies cancellation noise). */
    double newton_stall_tol = 1e-9;
    /** Relative size of a Newton increment below which the iterate is
     * treated as converged even if the residual sits above newton_tol:
     * at the double-precision floor the increment collapses to O(eps)
     * while the residual plateaus at the cancellation noise level. */
    double newton_step_tol = 1e-11;
    int max_newton = 50;
    int max_line_search = 30;
    /** Sample S at the end of the step instead of the default left endpoint. */
    bool forcing_sample_end = false;
};

struct StepStats {
    int newton_iters = 0;
    int substeps = 0;
    double residual_norm = 0.0;
};

class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/** One implicit minimizing-movement step of
 *      d_t u + d_x ( f_eps(u) d_x I(u) ) = S
 * solved by damped Newton with a dense analytic Jacobian. The zero-mode of
 * the update is linear and decoupled, so the iteration pins the mass
 * identity exactly. On Newton failure the step is split into two half
 * steps, recursively, down to tau_min. */
class Stepper {
  public:
    Stepper(std::shared_ptr<const FractionalOps> ops, EntropyParams ent, ForcingSpec forcing,
            StepperOptions opt);

    const StepperOptions& options() const { return opt_; }
    const EntropyParams& entropy() const { return ent_; }
    const ForcingSpec& forcing() const { return forcing_; }
    const std::shared_ptr<const FractionalOps>& ops() const { return ops_; }

    /** Nodal residual of the implicit equation at candidate state u. */
    Vec residual(const Vec& u, const Vec& u_prev, const Vec& s_nodal, double tau) const;

    /** Advance from u_prev over [t, t+tau]; never splits. Throws SolverError
     * on divergence. */
    Field step(const Field& u_prev, double t, double tau, StepStats* stats = nullptr) const;

    /** Advance one nominal step of size options().tau with substep fallback. */
    Field advance(const Field& u_prev, double t, StepStats* stats = nullptr) const;

  private:
    std::shared_ptr<const FractionalOps> ops_;
    EntropyParams ent_;
    ForcingSpec forcing_;
    StepperOptions opt_;

    Field advance_rec(const Field& u_prev, double t, double tau, StepStats* stats,
                      int depth) const;
};

} // namespace tf

#endif
