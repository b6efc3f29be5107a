#include "inequalities.hpp"

#include <cmath>
#include <random>

namespace tf {

namespace {

/** sup_x |f - mean f| / [f]_s for a zero-mean coefficient vector. */
double ratio_for(const FractionalOps& ops, const Vec& c) {
    const auto& d = ops.domain();
    Field f = Field::from_coeff(d, c);
    double semi = std::sqrt(ops.seminorm_sq(f, ops.s()));
    if (semi == 0.0) return 0.0;
    // the sup of a cosine series sits either at a node or at an endpoint
    double sup = f.nodal().cwiseAbs().maxCoeff();
    for (double x : {d->a(), d->b()}) {
        double v = 0.0;
        for (int k = 1; k < d->size(); k++) v += c[k] * d->basis(k, x);
        sup = std::max(sup, std::abs(v));
    }
    return sup / semi;
}

} // namespace

double estimate_embedding_constant(const FractionalOps& ops, int draws, std::uint64_t seed) {
    const auto& d = ops.domain();
    const int n = d->size();
    const int kmax = std::min(n - 1, 64);
    const double s = ops.s();

    double best = 0.0;
    Vec best_c = Vec::Zero(n);
    for (int k = 1; k <= kmax; k++) {
        Vec c = Vec::Zero(n);
        c[k] = 1.0;
        double r = ratio_for(ops, c);
        if (r > best) {
            best = r;
            best_c = c;
        }
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < draws; i++) {
        Vec c = Vec::Zero(n);
        for (int k = 1; k <= kmax; k++)
            c[k] = g(rng) * std::pow(d->lambda(k), -0.5 * s - 0.51);
        double r = ratio_for(ops, c);
        if (r > best) {
            best = r;
            best_c = c;
        }
    }

    // greedy coordinate ascent from the best candidate
    double step = 0.5;
    for (int pass = 0; pass < 60; pass++) {
        bool improved = false;
        for (int k = 1; k <= kmax; k++) {
            double scale = std::max(1e-3, std::abs(best_c[k]));
            for (double dir : {1.0, -1.0}) {
                Vec c = best_c;
                c[k] += dir * step * scale;
                double r = ratio_for(ops, c);
                if (r > best) {
                    best = r;
                    best_c = c;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
        if (step < 1e-6) break;
    }
    return 1.05 * best;
}

double poincare_constant(const FractionalOps& ops) {
    return std::pow(ops.domain()->lambda(1), -ops.s());
}

double weighted_interpolation_margin(const FractionalOps& ops, const Field& v, const Field& w) {
    const auto& d = ops.domain();
    const double h = d->weight();
    const Vec& vn = v.nodal();
    const Vec& wn = w.nodal();
    double a = 0.0;
    for (int j = 0; j < vn.size(); j++) a += vn[j] * vn[j] / wn[j];
    a *= h;
    Vec flux = ops.dx_I(v); // dx(-Delta)^s v up to sign, squared below
    double b = 0.0;
    for (int j = 0; j < vn.size(); j++) b += wn[j] * flux[j] * flux[j];
    b *= h;
    double mid = ops.seminorm_sq(v, ops.s()); // int |(-Delta)^{s/2} v|^2
    double len = d->length();
    double rhs = mid * mid / (4.0 * len * len);
    if (rhs == 0.0) return 0.0;
    return a * b / rhs - 1.0;
}

double frac_laplacian_at_min(const FractionalOps& ops, const Field& v) {
    return ops.apply_frac(v).nodal()[v.argmin()];
}

double seminorm_interpolation_margin(const FractionalOps& ops, const Field& u, double s0,
                                     double s1, double s) {
    double theta = (s - s0) / (s1 - s0);
    double lhs = std::sqrt(ops.seminorm_sq(u, s));
    double rhs = std::pow(ops.seminorm_sq(u, s0), 0.5 * (1.0 - theta)) *
                 std::pow(ops.seminorm_sq(u, s1), 0.5 * theta);
    return rhs - lhs;
}

} // namespace tf
