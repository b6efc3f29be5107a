#ifndef TF_INEQUALITIES_HPP
#define TF_INEQUALITIES_HPP

#include <cstdint>

#include "spectral.hpp"

namespace tf {

/** Empirical constant c for sup |f - mean f| <= c [f]_s (needs s > 1/2).
 * Maximizes the ratio over single modes, random decaying draws, and a
 * greedy ascent from the best candidate, then inflates by 5%. The search
 * family lives on modes k <= 64 so the estimate is stable under grid
 * refinement. */
double estimate_embedding_constant(const FractionalOps& ops, int draws = 10000,
                                   std::uint64_t seed = 1234);

/** Sharp Poincare constant lambda_1^{-s} for || f - mean ||_2^2 <= C [f]_s^2. */
double poincare_constant(const FractionalOps& ops);

/** Weighted interpolation bound for positive fields v, w:
 *    int v^2/w * int w |dx (-Delta)^s v|^2 >= (1/(4|Omega|^2)) (int |(-Delta)^{s/2} v|^2)^2.
 * Returns LHS/RHS - 1 (nonnegative when the bound holds). */
double weighted_interpolation_margin(const FractionalOps& ops, const Field& v, const Field& w);

/** Value of (-Delta)^s v at the nodal argmin of v (should be <= small). */
double frac_laplacian_at_min(const FractionalOps& ops, const Field& v);

/** Holder interpolation of seminorms: [u]_s <= [u]_{s0}^{1-theta} [u]_{s1}^{theta},
 * theta = (s-s0)/(s1-s0). Returns RHS - LHS. */
double seminorm_interpolation_margin(const FractionalOps& ops, const Field& u, double s0,
                                     double s1, double s);

} // namespace tf

#endif
