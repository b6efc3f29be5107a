#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stepper.hpp"

using namespace tf;

namespace {

struct Setup {
    DomainPtr dom;
    std::shared_ptr<FractionalOps> ops;
    Field u0;
};

Setup make_setup(double amp = 0.3) {
    Setup s;
    s.dom = std::make_shared<Domain>(0.0, M_PI, 64);
    s.ops = std::make_shared<FractionalOps>(s.dom, 0.75);
    Vec c = Vec::Zero(64);
    c[0] = 1.0 * std::sqrt(M_PI);
    c[1] = amp;
    s.u0 = Field::from_coeff(s.dom, std::move(c));
    return s;
}

/** Forward-Euler reference integrator at a tiny step. */
Field explicit_reference(const FractionalOps& ops, const EntropyParams& ent,
                         const ForcingSpec& forcing, Field u, double t0, double t1, long steps) {
    const auto& d = ops.domain();
    double dt = (t1 - t0) / steps;
    Vec v = u.nodal();
    for (long i = 0; i < steps; i++) {
        Field f = Field::from_nodal(d, v);
        Vec flux = ops.dx_I(f);
        for (int j = 0; j < v.size(); j++) flux[j] *= mobility(v[j], ent);
        Vec s = forcing.evaluate(d, t0 + i * dt).nodal();
        v += dt * (s - ops.div_sine(flux).nodal());
    }
    return Field::from_nodal(d, std::move(v));
}

} // namespace

TEST_CASE("constructor validation") {
    Setup s = make_setup();
    ForcingSpec f;
    CHECK_THROWS(Stepper(s.ops, EntropyParams{.n = 2.0, .eps = 0.0}, f, StepperOptions{}));
    CHECK_THROWS(Stepper(s.ops, EntropyParams{.n = 1.0, .eps = 1e-6}, f, StepperOptions{}));
}

TEST_CASE("single implicit step: residual, mass, and energy decay") {
    Setup s = make_setup();
    EntropyParams ent{.n = 2.0, .eps = 1e-6, .anchor = 1.0};
    ForcingSpec f; // zero forcing
    StepperOptions opt;
    opt.newton_tol = 1e-12;
    Stepper st(s.ops, ent, f, opt);

    StepStats stats;
    Field u1 = st.step(s.u0, 0.0, 1e-2, &stats);
    CHECK(stats.residual_norm <= 2e-12); // tolerance scales with the state norm
    CHECK(u1.mass() == doctest::Approx(s.u0.mass()).epsilon(1e-14));
    CHECK(s.ops->seminorm_sq(u1, 0.75) < s.ops->seminorm_sq(s.u0, 0.75));

    Vec r = st.residual(u1.nodal(), s.u0.nodal(), f.evaluate(s.dom, 0.0).nodal(), 1e-2);
    CHECK(std::sqrt(s.dom->weight()) * r.norm() <= 2e-12);
}

TEST_CASE("mass identity under forcing, both sample rules") {
    Setup s = make_setup();
    EntropyParams ent{.n = 2.0, .eps = 1e-6, .anchor = 1.0};
    ForcingSpec f;
    f.kind = ForcingSpec::Kind::SpaceTime;
    f.a1 = 1.0;
    f.sigma = 1.5;
    f.coeffs.assign(64, 0.0);
    f.coeffs[0] = std::sqrt(M_PI);
    f.coeffs[1] = 0.2;
    for (bool end : {false, true}) {
        StepperOptions opt;
        opt.forcing_sample_end = end;
        Stepper st(s.ops, ent, f, opt);
        Field u = s.u0;
        double t = 0.0, tau = 1e-2;
        for (int k = 0; k < 50; k++) {
            Field un = st.step(u, t, tau);
            double ts = end ? t + tau : t;
            CHECK(std::abs(un.mass() - u.mass() - tau * f.mass_rate(s.dom, ts)) < 1e-12);
            u = un;
            t += tau;
        }
    }
}

TEST_CASE("implicit step agrees with a fine explicit reference") {
    // coarse grid: forward Euler needs dt below the stiff stability limit
    auto dom = std::make_shared<Domain>(0.0, M_PI, 32);
    auto ops = std::make_shared<FractionalOps>(dom, 0.75);
    Vec c0 = Vec::Zero(32);
    c0[0] = std::sqrt(M_PI);
    c0[1] = 0.2;
    Field u0 = Field::from_coeff(dom, std::move(c0));
    EntropyParams ent{.n = 2.0, .eps = 1e-6, .anchor = 1.0};
    ForcingSpec f;
    Stepper st(ops, ent, f, StepperOptions{});
    double tau = 1e-3;
    Field imp = st.step(u0, 0.0, tau);
    Field ref = explicit_reference(*ops, ent, f, u0, 0.0, tau, 4000);
    double diff = (imp.nodal() - ref.nodal()).cwiseAbs().maxCoeff();
    CHECK(diff < 1e-4);
    CHECK(diff > 0.0);
}

TEST_CASE("halving tau improves the terminal state at first order") {
    Setup s = make_setup();
    EntropyParams ent{.n = 2.0, .eps = 1e-6, .anchor = 1.0};
    ForcingSpec f;
    auto terminal = [&](double tau) {
        StepperOptions opt;
        opt.tau = tau;
        Stepper st(s.ops, ent, f, opt);
        Field u = s.u0;
        long steps = std::lround(0.5 / tau);
        for (long k = 0; k < steps; k++) u = st.advance(u, k * tau);
        return u;
    };
    Field a = terminal(1e-2), b = terminal(5e-3), c = terminal(2.5e-3);
    double h = std::sqrt(s.dom->weight());
    double d1 = h * (a.nodal() - b.nodal()).norm();
    double d2 = h * (b.nodal() - c.nodal()).norm();
    CHECK(d1 / d2 >= 1.6);
    CHECK(d1 / d2 <= 2.6);
}

TEST_CASE("failed steps fall back to halved substeps and tau_min aborts") {
    Setup s = make_setup(0.45);
    EntropyParams ent{.n = 3.0, .eps = 1e-8, .anchor = 1.0};
    ForcingSpec f;
    StepperOptions opt;
    opt.tau = 5.0;
    opt.max_newton = 4; // force Newton failures at the nominal step size
    opt.newton_stall_tol = opt.newton_tol; // no roundoff-floor acceptance
    opt.newton_step_tol = 0.0;
    opt.tau_min = 1e-4;
    Stepper st(s.ops, ent, f, opt);
    StepStats stats;
    Field u1 = st.advance(s.u0, 0.0, &stats);
    CHECK(stats.substeps > 1);
    CHECK(u1.mass() == doctest::Approx(s.u0.mass()).epsilon(1e-12));

    opt.max_newton = 1;
    opt.tau_min = 4.0; // halving immediately underflows
    Stepper st2(s.ops, ent, f, opt);
    CHECK_THROWS_AS((void)st2.advance(s.u0, 0.0), SolverError);
}
