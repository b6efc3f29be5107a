#ifndef TF_SPECTRAL_HPP
#define TF_SPECTRAL_HPP

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace tf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/** Uniform midpoint grid on (a,b) together with the Neumann cosine
 * eigenbasis phi_0 = (1/L)^{1/2}, phi_k = (2/L)^{1/2} cos(k pi (x-a)/L)
 * and the companion sine system psi_k = (2/L)^{1/2} sin(k pi (x-a)/L).
 * The midpoint nodes make the discrete quadrature h * sum_j exactly
 * orthonormal on both systems (k <= N-1), which every operator below
 * relies on. */
class Domain {
  public:
    Domain(double a, double b, int n);

    double a() const { return a_; }
    double b() const { return b_; }
    double length() const { return len_; }
    int size() const { return n_; }
    double weight() const { return h_; }
    const Vec& nodes() const { return nodes_; }
    double node(int j) const { return nodes_[j]; }
    /** k-th Neumann eigenvalue (k pi / L)^2. */
    double lambda(int k) const;
    /** phi_k evaluated at x. */
    double basis(int k, double x) const;

    /** Nodal evaluation matrix E(j,k) = phi_k(x_j). */
    const Mat& eval_matrix() const { return eval_; }
    /** Sine evaluation matrix Sn(j,k-1) = psi_k(x_j), k = 1..N-1. */
    const Mat& sine_matrix() const { return sine_; }

    /** Nodal values -> cosine coefficients (exact on the grid). */
    Vec to_coeff(const Vec& nodal) const;
    /** Cosine coefficients -> nodal values. */
    Vec to_nodal(const Vec& coeff) const;
    /** Nodal values -> sine coefficients s_1..s_{N-1}. */
    Vec to_sine_coeff(const Vec& nodal) const;

    /** h * sum_j f_j, the exact integral of the grid interpolant. */
    double integrate(const Vec& nodal) const { return h_ * nodal.sum(); }
    double mean(const Vec& nodal) const { return nodal.sum() / n_; }

  private:
    double a_, b_, len_, h_;
    int n_;
    Vec nodes_;
    Mat eval_;
    Mat sine_;
};

using DomainPtr = std::shared_ptr<const Domain>;

/** Scalar field on a Domain, carried in nodal and/or spectral form with
 * lazy synchronization. Behaves as-if immutable: all mutators return new
 * fields, and filling the missing representation is guarded so concurrent
 * reads are safe. */
class Field {
  public:
    Field() = default;
    static Field from_nodal(DomainPtr d, Vec nodal);
    static Field from_coeff(DomainPtr d, Vec coeff);
    static Field constant(DomainPtr d, double value);

    const DomainPtr& domain() const { return p_->dom; }
    const Vec& nodal() const;
    const Vec& coeff() const;

    double mass() const;
    double mean() const;
    double min() const { return nodal().minCoeff(); }
    double max() const { return nodal().maxCoeff(); }
    /** Index of the nodal minimum. */
    int argmin() const;

  private:
    struct Payload {
        DomainPtr dom;
        mutable Vec nodal, coeff;
        mutable bool has_nodal = false, has_coeff = false;
        mutable std::mutex mu;
    };
    std::shared_ptr<Payload> p_;
};

Field operator+(const Field& f, const Field& g);
Field operator-(const Field& f, const Field& g);
Field operator*(double c, const Field& f);

/** Spectral realization of I = -(-Delta)^s and its first-derivative
 * factorizations on a fixed Domain, plus the dense nodal matrices the
 * implicit stepper needs for its Jacobian. */
class FractionalOps {
  public:
    FractionalOps(DomainPtr d, double s);

    double s() const { return s_; }
    const DomainPtr& domain() const { return dom_; }

    /** I(f) = -(-Delta)^s f: coefficient map c_k -> -c_k lambda_k^s. */
    Field apply_I(const Field& f) const;
    /** (-Delta)^s f. */
    Field apply_frac(const Field& f) const;
    /** Solve (-Delta)^s u = g with zero mean; g must have zero mean. */
    Field solve_poisson(const Field& g) const;

    /** Nodal values of d/dx of the cosine series of f. */
    Vec dx(const Field& f) const;
    /** Nodal values of d/dx I(f). */
    Vec dx_I(const Field& f) const;
    /** Divergence of a nodal flux through the sine expansion; the k=0
     * cosine coefficient of the result is identically zero. */
    Field div_sine(const Vec& flux_nodal) const;

    /** [f]_{sigma}^2: sum over k>=1 of c_k^2 lambda_k^sigma, and the plain
     * squared L2 norm when sigma == 0. */
    double seminorm_sq(const Field& f, double sigma) const;
    /** ||f||_{H^s}^2 = ||f||_2^2 + [f]_s^2. */
    double hs_norm_sq(const Field& f) const;

    /** Dense nodal matrix of f -> dx I(f). */
    const Mat& grad_I_matrix() const { return m1_; }
    /** Dense nodal matrix of g -> nodal(div_sine(g)). */
    const Mat& div_matrix() const { return m2_; }

    /** Direct method-of-images kernel quadrature for I, used only as a
     * cross-check of apply_I. The kernel constant is calibrated on the
     * first eigenfunction; `images` truncates the image sum. */
    Vec kernel_apply(const Field& f, int images = 64) const;

  private:
    DomainPtr dom_;
    double s_;
    Vec lam_s_;     // lambda_k^s
    Mat m1_, m2_;
    mutable double kernel_cal_ = 0.0;
    mutable std::mutex kernel_mu_;
    Vec kernel_apply_raw(const Field& f, int images) const;
};

} // namespace tf

#endif
