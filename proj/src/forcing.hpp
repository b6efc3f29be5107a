#ifndef TF_FORCING_HPP
#define TF_FORCING_HPP

#include <vector>

#include "spectral.hpp"

namespace tf {

/** Source term S(t,x). Three kinds:
 *  - Constant: S = s0 everywhere.
 *  - Spatial: time-independent cosine series with given coefficients.
 *  - SpaceTime: separable g(t) h(x) with g(t) = a1 / (2 (1+t)^sigma) and
 *    h(x) a cosine series.
 */
struct ForcingSpec {
    enum class Kind { Constant, Spatial, SpaceTime };
    Kind kind = Kind::Constant;
    double s0 = 0.0;
    std::vector<double> coeffs; // cosine coefficients of the spatial profile
    double a1 = 0.0;
    double sigma = 1.5;

    double time_factor(double t) const;
    Field evaluate(const DomainPtr& d, double t) const;
    /** [S(t)]_s. */
    double seminorm(const FractionalOps& ops, double t) const;
    /** int_Omega S(t,x) dx. */
    double mass_rate(const DomainPtr& d, double t) const;
    /** Smallness condition [S(t)]_s <= int S / (|Omega| c_emb) at every
     * sample time; constant-in-space forcing passes iff s0 >= 0. */
    bool admissible(const FractionalOps& ops, double c_emb, double t_end, int samples) const;
};

} // namespace tf

#endif
