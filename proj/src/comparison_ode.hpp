#ifndef TF_COMPARISON_ODE_HPP
#define TF_COMPARISON_ODE_HPP

#include <functional>
#include <vector>

namespace tf {

/** Decay machinery for scalar differential inequalities
 *      X'(t) <= alpha(t) X^lambda + beta X^p,
 * with lambda in [0,1), p > 1, beta < 0.
 *
 * Case 1: alpha(t) <= a1 / (1+t)^sigma with sigma >= (p-lambda)/(p-1)
 * gives X(t) <= (b1 (1-lambda))^{1/(1-lambda)} / (1+t)^{1/(p-1)}, where b1
 * is the unique root above b0 of
 *      F(B) = -beta (1-lambda)^{(p-lambda)/(1-lambda)} B^{(p-lambda)/(1-lambda)}
 *             - B (1-lambda)/(p-1) - a1.
 *
 * Case 2: constant alpha gives the threshold (alpha/-beta)^{1/(p-lambda)};
 * initial data above it decays toward it along an explicit envelope. */
struct OdeParams {
    double lambda = 0.0;
    double p = 2.0;
    double beta = -1.0;
};

/** F(B) from case 1. */
double envelope_root_function(const OdeParams& q, double a1, double B);
/** Lower endpoint b0 of the root bracket (where F = -a1). */
double envelope_root_lower(const OdeParams& q);
/** Root b1 of F, found by bisection to |F(b1)| <= 1e-12. */
double solve_b1(const OdeParams& q, double a1);

/** Case-1 envelope at time t. */
double bound_case1(const OdeParams& q, double a1, double t);
/** Case-2 threshold and envelope. */
double threshold_case2(const OdeParams& q, double alpha);
double bound_case2(const OdeParams& q, double alpha, double x0, double t);

/** RK4 trajectory of the equality ODE X' = alpha(t) X^lambda + beta X^p. */
struct OdeTrajectory {
    std::vector<double> t, x;
};
OdeTrajectory integrate_equality(const OdeParams& q, const std::function<double(double)>& alpha,
                                 double x0, double t_end, double dt);

/** Integrate the equality ODE and verify it stays below the given envelope;
 * returns the worst relative margin min_t (env - X)/max(1,env). */
double verify_comparison(const OdeParams& q, const std::function<double(double)>& alpha,
                         const std::function<double(double)>& envelope, double x0, double t_end,
                         double dt);

} // namespace tf

#endif
