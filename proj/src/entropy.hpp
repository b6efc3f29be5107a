#ifndef TF_ENTROPY_HPP
#define TF_ENTROPY_HPP

#include <functional>

#include "spectral.hpp"

namespace tf {

/** Mobility exponent n > 1, regularization eps >= 0, and the anchor A > 0
 * at which the entropy density and its derivative vanish. */
struct EntropyParams {
    double n = 2.0;
    double eps = 0.0;
    double anchor = 1.0;
};

/** Regularized mobility f_eps(z) = max(z,0)^n + eps. */
double mobility(double z, const EntropyParams& p);
/** d/dz mobility: n * max(z,0)^{n-1}, taken 0 for z <= 0. */
double mobility_prime(double z, const EntropyParams& p);

/** Entropy density with G''(z) = z^{-n}, G(A) = G'(A) = 0, in closed form
 * (eps is ignored); +infinity for z < 0, and at z = 0 when n >= 2. */
double entropy_value(double z, const EntropyParams& p);
/** G'(z) for the unregularized density. */
double entropy_prime(double z, const EntropyParams& p);

/** Regularized density G_eps(z) = int_A^z (z-t)/f_eps(t) dt by adaptive
 * quadrature; finite for all real z when eps > 0. */
double entropy_value_eps(double z, const EntropyParams& p);
/** G_eps'(z) = int_A^z dt/f_eps(t). */
double entropy_prime_eps(double z, const EntropyParams& p);

/** h * sum_j G_eps(u_j) (closed form when eps == 0). */
double entropy_integral(const Field& u, const EntropyParams& p);

/** Energy J = [u]_s^2 together with the nodal dissipation integral
 * int f_eps(u) |dx I(u)|^2. */
struct EnergyReport {
    double energy = 0.0;
    double dissipation = 0.0;
};
EnergyReport energy_report(const FractionalOps& ops, const Field& u, const EntropyParams& p);

/** Adaptive Simpson quadrature, exposed for oracle use in tests. */
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-13);

} // namespace tf

#endif
