#include "spectral.hpp"

#include <cmath>

namespace tf {

Domain::Domain(double a, double b, int n) : a_(a), b_(b), n_(n) {
    if (!(b > a)) throw std::invalid_argument("domain: need b > a");
    if (n < 4) throw std::invalid_argument("domain: need at least 4 nodes");
    len_ = b - a;
    h_ = len_ / n;
    nodes_.resize(n);
    for (int j = 0; j < n; j++) nodes_[j] = a + (j + 0.5) * h_;
    eval_.resize(n, n);
    const double c0 = std::sqrt(1.0 / len_), c1 = std::sqrt(2.0 / len_);
    for (int j = 0; j < n; j++) {
        eval_(j, 0) = c0;
        for (int k = 1; k < n; k++)
            eval_(j, k) = c1 * std::cos(k * M_PI * (j + 0.5) / n);
    }
    sine_.resize(n, n - 1);
    for (int j = 0; j < n; j++)
        for (int k = 1; k < n; k++)
            sine_(j, k - 1) = c1 * std::sin(k * M_PI * (j + 0.5) / n);
}

double Domain::lambda(int k) const {
    double w = k * M_PI / len_;
    return w * w;
}

double Domain::basis(int k, double x) const {
    if (k == 0) return std::sqrt(1.0 / len_);
    return std::sqrt(2.0 / len_) * std::cos(k * M_PI * (x - a_) / len_);
}

Vec Domain::to_coeff(const Vec& nodal) const { return h_ * (eval_.transpose() * nodal); }
Vec Domain::to_nodal(const Vec& coeff) const { return eval_ * coeff; }
Vec Domain::to_sine_coeff(const Vec& nodal) const { return h_ * (sine_.transpose() * nodal); }

Field Field::from_nodal(DomainPtr d, Vec nodal) {
    if ((int)nodal.size() != d->size()) throw std::invalid_argument("field: nodal size mismatch");
    Field f;
    f.p_ = std::make_shared<Payload>();
    f.p_->dom = std::move(d);
    f.p_->nodal = std::move(nodal);
    f.p_->has_nodal = true;
    return f;
}

Field Field::from_coeff(DomainPtr d, Vec coeff) {
    if ((int)coeff.size() != d->size()) throw std::invalid_argument("field: coeff size mismatch");
    Field f;
    f.p_ = std::make_shared<Payload>();
    f.p_->dom = std::move(d);
    f.p_->coeff = std::move(coeff);
    f.p_->has_coeff = true;
    return f;
}

Field Field::constant(DomainPtr d, double value) {
    Vec c = Vec::Zero(d->size());
    c[0] = value * std::sqrt(d->length());
    return from_coeff(std::move(d), std::move(c));
}

const Vec& Field::nodal() const {
    if (!p_->has_nodal) {
        std::lock_guard<std::mutex> lk(p_->mu);
        if (!p_->has_nodal) {
            p_->nodal = p_->dom->to_nodal(p_->coeff);
            p_->has_nodal = true;
        }
    }
    return p_->nodal;
}

const Vec& Field::coeff() const {
    if (!p_->has_coeff) {
        std::lock_guard<std::mutex> lk(p_->mu);
        if (!p_->has_coeff) {
            p_->coeff = p_->dom->to_coeff(p_->nodal);
            p_->has_coeff = true;
        }
    }
    return p_->coeff;
}

double Field::mass() const { return coeff()[0] * std::sqrt(p_->dom->length()); }
double Field::mean() const { return mass() / p_->dom->length(); }

int Field::argmin() const {
    int j = 0;
    nodal().minCoeff(&j);
    return j;
}

Field operator+(const Field& f, const Field& g) {
    return Field::from_nodal(f.domain(), f.nodal() + g.nodal());
}
Field operator-(const Field& f, const Field& g) {
    return Field::from_nodal(f.domain(), f.nodal() - g.nodal());
}
Field operator*(double c, const Field& f) {
    return Field::from_nodal(f.domain(), c * f.nodal());
}

FractionalOps::FractionalOps(DomainPtr d, double s) : dom_(std::move(d)), s_(s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("ops: need s in (0,1)");
    const int n = dom_->size();
    lam_s_.resize(n);
    lam_s_[0] = 0.0;
    for (int k = 1; k < n; k++) lam_s_[k] = std::pow(dom_->lambda(k), s);

    // m1: nodal u -> nodal dx I(u).  Coefficient k of I(u) is -c_k lam^s, and
    // d/dx phi_k = -(k pi / L) psi_k, so mode k lands on +c_k lam^s (k pi/L) psi_k.
    const double L = dom_->length(), h = dom_->weight();
    Mat forward = h * dom_->eval_matrix().transpose();
    Mat d1 = Mat::Zero(n - 1, n);
    for (int k = 1; k < n; k++) d1(k - 1, k) = lam_s_[k] * (k * M_PI / L);
    m1_ = dom_->sine_matrix() * (d1 * forward);

    // m2: nodal flux -> nodal div via sine coefficients s_k -> cosine k with
    // factor k pi / L.
    Mat sfor = h * dom_->sine_matrix().transpose();
    Mat d2 = Mat::Zero(n, n - 1);
    for (int k = 1; k < n; k++) d2(k, k - 1) = k * M_PI / L;
    m2_ = dom_->eval_matrix() * (d2 * sfor);
}

Field FractionalOps::apply_I(const Field& f) const {
    Vec c = f.coeff();
    for (int k = 0; k < c.size(); k++) c[k] *= -lam_s_[k];
    return Field::from_coeff(dom_, std::move(c));
}

Field FractionalOps::apply_frac(const Field& f) const {
    Vec c = f.coeff();
    for (int k = 0; k < c.size(); k++) c[k] *= lam_s_[k];
    return Field::from_coeff(dom_, std::move(c));
}

Field FractionalOps::solve_poisson(const Field& g) const {
    Vec c = g.coeff();
    double l2 = std::sqrt(seminorm_sq(g, 0.0));
    if (std::abs(g.mass()) > 1e-10 * std::max(1.0, l2))
        throw std::invalid_argument("solve_poisson: right-hand side must have zero mean");
    c[0] = 0.0;
    for (int k = 1; k < c.size(); k++) c[k] /= lam_s_[k];
    return Field::from_coeff(dom_, std::move(c));
}

Vec FractionalOps::dx(const Field& f) const {
    const Vec& c = f.coeff();
    const int n = dom_->size();
    const double L = dom_->length();
    Vec s(n - 1);
    for (int k = 1; k < n; k++) s[k - 1] = -c[k] * (k * M_PI / L);
    return dom_->sine_matrix() * s;
}

Vec FractionalOps::dx_I(const Field& f) const { return m1_ * f.nodal(); }

Field FractionalOps::div_sine(const Vec& flux_nodal) const {
    Vec s = dom_->to_sine_coeff(flux_nodal);
    const int n = dom_->size();
    const double L = dom_->length();
    Vec c = Vec::Zero(n);
    for (int k = 1; k < n; k++) c[k] = s[k - 1] * (k * M_PI / L);
    return Field::from_coeff(dom_, std::move(c));
}

double FractionalOps::seminorm_sq(const Field& f, double sigma) const {
    const Vec& c = f.coeff();
    if (sigma == 0.0) return c.squaredNorm();
    double acc = 0.0;
    for (int k = (int)c.size() - 1; k >= 1; k--)
        acc += c[k] * c[k] * std::pow(dom_->lambda(k), sigma);
    return acc;
}

double FractionalOps::hs_norm_sq(const Field& f) const {
    return f.coeff().squaredNorm() + seminorm_sq(f, s_);
}

namespace {

/** Periodized image kernel on the reference interval (0,1), without the
 * multiplicative constant: sum over |k| <= M of |x-y-2k|^{-1-2s} +
 * |x+y-2k|^{-1-2s}, skipping the singular direct term when x == y. */
double image_kernel(double x, double y, double s, int images) {
    const double q = -1.0 - 2.0 * s;
    double acc = 0.0;
    for (int k = -images; k <= images; k++) {
        double d = x - y - 2.0 * k;
        if (d != 0.0) acc += std::pow(std::abs(d), q);
        double r = x + y - 2.0 * k;
        if (r != 0.0) acc += std::pow(std::abs(r), q);
    }
    return acc;
}

} // namespace

Vec FractionalOps::kernel_apply_raw(const Field& f, int images) const {
    const int n = dom_->size();
    const double hh = 1.0 / n; // mapped cell width on (0,1)
    const Vec& u = f.nodal();
    const Vec& c = f.coeff();
    const double L = dom_->length();
    const double a = dom_->a();

    // second derivative in mapped coordinates, for the Taylor patch of the
    // excluded singular sliver
    Vec cpp = c;
    for (int k = 0; k < n; k++) cpp[k] *= -dom_->lambda(k) * L * L;
    Vec upp = dom_->to_nodal(cpp);

    auto eval = [&](double xhat) {
        double x = a + L * xhat;
        double v = 0.0;
        for (int k = 0; k < n; k++) v += c[k] * dom_->basis(k, x);
        return v;
    };

    const int near = 4;   // cells around the diagonal refined by subdivision
    const int sub = 16;
    Vec out(n);
    for (int j = 0; j < n; j++) {
        const double xj = (j + 0.5) * hh;
        double acc = 0.0;
        for (int i = 0; i < n; i++) {
            if (std::abs(i - j) <= near) continue;
            const double yi = (i + 0.5) * hh;
            acc += (u[i] - u[j]) * image_kernel(xj, yi, s_, images) * hh;
        }
        const double hs = hh / sub;
        for (int i = std::max(0, j - near); i <= std::min(n - 1, j + near); i++) {
            for (int m = 0; m < sub; m++) {
                double y = i * hh + (m + 0.5) * hs;
                if (std::abs(y - xj) < 0.5 * hs) continue;
                acc += (eval(y) - u[j]) * image_kernel(xj, y, s_, images) * hs;
            }
        }
        // excluded sliver |y - xj| < hs/2 of the direct k=0 term
        acc += upp[j] * std::pow(0.5 * hs, 2.0 - 2.0 * s_) / (2.0 - 2.0 * s_);
        out[j] = acc;
    }
    return out;
}

Vec FractionalOps::kernel_apply(const Field& f, int images) const {
    {
        std::lock_guard<std::mutex> lk(kernel_mu_);
        if (kernel_cal_ == 0.0) {
            const int n = dom_->size();
            Vec c = Vec::Zero(n);
            c[1] = 1.0;
            Field phi1 = Field::from_coeff(dom_, std::move(c));
            Vec raw = kernel_apply_raw(phi1, images);
            Vec ref = apply_I(phi1).nodal();
            kernel_cal_ = raw.dot(ref) / raw.squaredNorm();
        }
    }
    return kernel_cal_ * kernel_apply_raw(f, images);
}

} // namespace tf
