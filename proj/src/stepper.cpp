#include "stepper.hpp"

#include <cmath>
#include <limits>

namespace tf {

Stepper::Stepper(std::shared_ptr<const FractionalOps> ops, EntropyParams ent, ForcingSpec forcing,
                 StepperOptions opt)
    : ops_(std::move(ops)), ent_(ent), forcing_(std::move(forcing)), opt_(opt) {
    if (!(ent_.eps > 0.0))
        throw std::invalid_argument("stepper: epsilon must be positive");
    if (!(ent_.n > 1.0)) throw std::invalid_argument("stepper: need n > 1");
    if (!(opt_.tau > 0.0) || !(opt_.tau_min > 0.0))
        throw std::invalid_argument("stepper: need positive tau and tau_min");
}

Vec Stepper::residual(const Vec& u, const Vec& u_prev, const Vec& s_nodal, double tau) const {
    const int n = (int)u.size();
    Vec flux = ops_->grad_I_matrix() * u;
    for (int j = 0; j < n; j++) flux[j] *= mobility(u[j], ent_);
    return u + tau * (ops_->div_matrix() * flux) - tau * s_nodal - u_prev;
}

Field Stepper::step(const Field& u_prev, double t, double tau, StepStats* stats) const {
    const auto& d = ops_->domain();
    const int n = d->size();
    const double sqrth = std::sqrt(d->weight());

    double ts = opt_.forcing_sample_end ? t + tau : t;
    Vec s_nodal = forcing_.evaluate(d, ts).nodal();

    const Vec& up = u_prev.nodal();
    const double mean_target = up.mean() + tau * s_nodal.mean();

    Vec u = up;
    auto pin_mean = [&](Vec& v) { v.array() += mean_target - v.mean(); };
    pin_mean(u);

    Vec r = residual(u, up, s_nodal, tau);
    double rnorm = sqrth * r.norm();
    const double scale = std::max(1.0, sqrth * up.norm());
    const double tol = opt_.newton_tol * scale;
    // forward-error bound of one residual evaluation: the stiff flux term
    // cancels against itself, so the achievable floor scales with the
    // magnitudes entering the dot products, not with the result
    Vec flux0 = ops_->grad_I_matrix() * u;
    for (int j = 0; j < n; j++) flux0[j] = std::abs(flux0[j]) * mobility(u[j], ent_);
    Vec amp = up.cwiseAbs() + tau * (ops_->div_matrix().cwiseAbs() * flux0) +
              tau * s_nodal.cwiseAbs();
    const double eval_floor =
        n * std::numeric_limits<double>::epsilon() * sqrth * amp.norm();
    const double stall_tol =
        std::max({tol, opt_.newton_stall_tol * scale, 10.0 * eval_floor});
    int it = 0;
    while (rnorm > tol) {
        if (++it > opt_.max_newton) {
            if (rnorm <= stall_tol) break;
            throw SolverError("newton: no convergence within iteration budget");
        }
        Vec gi = ops_->grad_I_matrix() * u;
        Mat inner = ops_->grad_I_matrix();
        for (int j = 0; j < n; j++) {
            inner.row(j) *= mobility(u[j], ent_);
            inner(j, j) += mobility_prime(u[j], ent_) * gi[j];
        }
        Mat jac = tau * (ops_->div_matrix() * inner);
        jac += Mat::Identity(n, n);
        Vec delta = jac.partialPivLu().solve(-r);
        // negligible increment: the iterate cannot be improved in double
        // precision, so the residual has reached its cancellation floor
        if (sqrth * delta.norm() <= opt_.newton_step_tol * scale) break;

        const double prev_rnorm = rnorm;
        double lam = 1.0;
        bool accepted = false;
        for (int ls = 0; ls <= opt_.max_line_search; ls++) {
            Vec cand = u + lam * delta;
            pin_mean(cand);
            Vec rc = residual(cand, up, s_nodal, tau);
            double rcn = sqrth * rc.norm();
            // near roundoff a strict decrease may be impossible; any
            // candidate already below the tolerance is good enough
            if (rcn < rnorm || rcn <= tol) {
                u = std::move(cand);
                r = std::move(rc);
                rnorm = rcn;
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        if (!accepted) {
            if (rnorm <= stall_tol) break;
            throw SolverError("newton: line search stalled");
        }
        // quadratic convergence has bottomed out at the roundoff floor
        if (rnorm <= stall_tol && rnorm > 0.25 * prev_rnorm) break;
    }
    if (stats) {
        stats->newton_iters += it;
        stats->residual_norm = std::max(stats->residual_norm, rnorm);
    }
    return Field::from_nodal(d, std::move(u));
}

Field Stepper::advance_rec(const Field& u_prev, double t, double tau, StepStats* stats,
                           int depth) const {
    try {
        Field out = step(u_prev, t, tau, stats);
        if (stats) stats->substeps += 1;
        return out;
    } catch (const SolverError&) {
        if (0.5 * tau < opt_.tau_min || depth > 40)
            throw SolverError("stepper: step size underflow below tau_min");
        Field mid = advance_rec(u_prev, t, 0.5 * tau, stats, depth + 1);
        return advance_rec(mid, t + 0.5 * tau, 0.5 * tau, stats, depth + 1);
    }
}

Field Stepper::advance(const Field& u_prev, double t, StepStats* stats) const {
    return advance_rec(u_prev, t, opt_.tau, stats, 0);
}

} // namespace tf
