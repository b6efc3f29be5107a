#include "entropy.hpp"

#include <cmath>
#include <limits>

namespace tf {

double mobility(double z, const EntropyParams& p) {
    return (z > 0.0 ? std::pow(z, p.n) : 0.0) + p.eps;
}

double mobility_prime(double z, const EntropyParams& p) {
    return z > 0.0 ? p.n * std::pow(z, p.n - 1.0) : 0.0;
}

double entropy_value(double z, const EntropyParams& p) {
    const double n = p.n, A = p.anchor;
    if (z < 0.0) return std::numeric_limits<double>::infinity();
    if (z == 0.0 && n >= 2.0) return std::numeric_limits<double>::infinity();
    if (n == 1.0) return z == 0.0 ? A : z * std::log(z / A) - z + A; // z log z -> 0 at z = 0
    if (n == 2.0) return z / A - std::log(z / A) - 1.0;
    return std::pow(z, 2.0 - n) / ((n - 1.0) * (n - 2.0)) +
           std::pow(A, 1.0 - n) * z / (n - 1.0) + std::pow(A, 2.0 - n) / (2.0 - n);
}

double entropy_prime(double z, const EntropyParams& p) {
    const double n = p.n, A = p.anchor;
    if (z <= 0.0) return -std::numeric_limits<double>::infinity();
    if (n == 1.0) return std::log(z / A);
    return (std::pow(z, 1.0 - n) - std::pow(A, 1.0 - n)) / (1.0 - n);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double m, double b,
               double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double m, double b,
                     double fa, double fm, double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, lm, m, fa, flm, fm);
    double right = simpson(f, m, rm, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_quad(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b), fa = f(a), fm = f(m), fb = f(b);
    double whole = simpson(f, a, m, b, fa, fm, fb);
    double scale = std::max({1.0, std::abs(fa), std::abs(fm), std::abs(fb)}) * std::abs(b - a);
    return adaptive_step(f, a, m, b, fa, fm, fb, whole, tol * scale, 48);
}

namespace {

// 16-point Gauss-Legendre rule on [-1, 1]
constexpr int kGl = 8;
constexpr double kGlX[kGl] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                              0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                              0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[kGl] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                              0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                              0.0622535239386479, 0.0271524594117541};

/** Integrates g over [t0, t1] (both positive) in log coordinates, where the
 * regularized mobility is analytic with O(1) feature width, by composite
 * Gauss-Legendre. */
template <class F>
double log_gl_quad(F g, double t0, double t1) {
    double w0 = std::log(t0), w1 = std::log(t1);
    int panels = std::max(2, (int)std::ceil(std::abs(w1 - w0) / 0.5));
    double acc = 0.0, dw = (w1 - w0) / panels;
    for (int pnl = 0; pnl < panels; pnl++) {
        double mid = w0 + (pnl + 0.5) * dw, half = 0.5 * dw;
        double local = 0.0;
        for (int i = 0; i < kGl; i++) {
            double wa = mid - half * kGlX[i], wb = mid + half * kGlX[i];
            double ta = std::exp(wa), tb = std::exp(wb);
            local += kGlW[i] * (g(ta) * ta + g(tb) * tb); // dt = e^w dw
        }
        acc += local * half;
    }
    return acc;
}

} // namespace

double entropy_value_eps(double z, const EntropyParams& p) {
    if (p.eps == 0.0) return entropy_value(z, p);
    auto g = [&](double t) { return (z - t) / mobility(t, p); };
    // split at 0 so the kink of max(z,0)^n stays on a panel edge
    if (z < 0.0)
        return adaptive_quad(g, p.anchor, 0.0) + adaptive_quad(g, 0.0, z);
    if (z == 0.0) return adaptive_quad(g, p.anchor, 0.0);
    return log_gl_quad(g, p.anchor, z);
}

double entropy_prime_eps(double z, const EntropyParams& p) {
    if (p.eps == 0.0) return entropy_prime(z, p);
    auto g = [&](double t) { return 1.0 / mobility(t, p); };
    if (z < 0.0)
        return adaptive_quad(g, p.anchor, 0.0) + adaptive_quad(g, 0.0, z);
    if (z == 0.0) return adaptive_quad(g, p.anchor, 0.0);
    return log_gl_quad(g, p.anchor, z);
}

double entropy_integral(const Field& u, const EntropyParams& p) {
    const Vec& v = u.nodal();
    double acc = 0.0;
    for (int j = 0; j < v.size(); j++) acc += entropy_value_eps(v[j], p);
    return u.domain()->weight() * acc;
}

EnergyReport energy_report(const FractionalOps& ops, const Field& u, const EntropyParams& p) {
    EnergyReport r;
    r.energy = ops.seminorm_sq(u, ops.s());
    Vec flux = ops.dx_I(u);
    const Vec& v = u.nodal();
    double acc = 0.0;
    for (int j = 0; j < v.size(); j++) acc += mobility(v[j], p) * flux[j] * flux[j];
    r.dissipation = u.domain()->weight() * acc;
    return r;
}

} // namespace tf
