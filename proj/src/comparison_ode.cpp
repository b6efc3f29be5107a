#include "comparison_ode.hpp"

#include <cmath>
#include <stdexcept>

namespace tf {

namespace {

void validate(const OdeParams& q) {
    if (!(q.lambda >= 0.0 && q.lambda < 1.0)) throw std::invalid_argument("ode: lambda in [0,1)");
    if (!(q.p > 1.0)) throw std::invalid_argument("ode: p > 1");
    if (!(q.beta < 0.0)) throw std::invalid_argument("ode: beta < 0");
}

} // namespace

double envelope_root_function(const OdeParams& q, double a1, double B) {
    const double e = (q.p - q.lambda) / (1.0 - q.lambda);
    return -q.beta * std::pow(1.0 - q.lambda, e) * std::pow(B, e) -
           B * (1.0 - q.lambda) / (q.p - 1.0) - a1;
}

double envelope_root_lower(const OdeParams& q) {
    return 1.0 / (1.0 - q.lambda) *
           std::pow(1.0 / (-q.beta * (q.p - 1.0)), (1.0 - q.lambda) / (q.p - 1.0));
}

double solve_b1(const OdeParams& q, double a1) {
    validate(q);
    if (!(a1 > 0.0)) throw std::invalid_argument("ode: a1 > 0");
    double lo = envelope_root_lower(q);
    double hi = lo;
    while (envelope_root_function(q, a1, hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 500; it++) {
        double mid = 0.5 * (lo + hi);
        double f = envelope_root_function(q, a1, mid);
        if (std::abs(f) <= 1e-12) return mid;
        (f < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double bound_case1(const OdeParams& q, double a1, double t) {
    double b1 = solve_b1(q, a1);
    return std::pow(b1 * (1.0 - q.lambda), 1.0 / (1.0 - q.lambda)) /
           std::pow(1.0 + t, 1.0 / (q.p - 1.0));
}

double threshold_case2(const OdeParams& q, double alpha) {
    validate(q);
    return std::pow(alpha / -q.beta, 1.0 / (q.p - q.lambda));
}

double bound_case2(const OdeParams& q, double alpha, double x0, double t) {
    double thr = threshold_case2(q, alpha);
    if (x0 <= thr) return thr;
    const double oml = 1.0 - q.lambda;
    double z0 = std::pow(x0, oml) - std::pow(alpha / -q.beta, oml / (q.p - q.lambda));
    double inner = std::pow(z0, (q.p - 1.0) / (q.lambda - 1.0)) - q.beta * (q.p - 1.0) * t;
    return std::pow(std::pow(alpha / -q.beta, oml / (q.p - q.lambda)) +
                        std::pow(inner, (q.lambda - 1.0) / (q.p - 1.0)),
                    1.0 / oml);
}

OdeTrajectory integrate_equality(const OdeParams& q, const std::function<double(double)>& alpha,
                                 double x0, double t_end, double dt) {
    validate(q);
    auto rhs = [&](double t, double x) {
        if (x <= 0.0) return alpha(t) * (x == 0.0 && q.lambda == 0.0 ? 1.0 : 0.0);
        return alpha(t) * std::pow(x, q.lambda) + q.beta * std::pow(x, q.p);
    };
    OdeTrajectory out;
    long steps = std::lround(t_end / dt);
    out.t.reserve(steps + 1);
    out.x.reserve(steps + 1);
    double t = 0.0, x = x0;
    out.t.push_back(t);
    out.x.push_back(x);
    for (long i = 0; i < steps; i++) {
        double k1 = rhs(t, x);
        double k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
        double k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
        double k4 = rhs(t + dt, x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (x < 0.0) x = 0.0;
        t = (i + 1) * dt;
        out.t.push_back(t);
        out.x.push_back(x);
    }
    return out;
}

double verify_comparison(const OdeParams& q, const std::function<double(double)>& alpha,
                         const std::function<double(double)>& envelope, double x0, double t_end,
                         double dt) {
    OdeTrajectory tr = integrate_equality(q, alpha, x0, t_end, dt);
    double worst = 1e300;
    for (size_t i = 0; i < tr.t.size(); i++) {
        double env = envelope(tr.t[i]);
        double margin = (env - tr.x[i]) / std::max(1.0, env);
        if (margin < worst) worst = margin;
    }
    return worst;
}

} // namespace tf
