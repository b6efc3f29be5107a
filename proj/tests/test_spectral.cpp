#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spectral.hpp"

using namespace tf;

namespace {

DomainPtr unit_domain(int n) { return std::make_shared<Domain>(0.0, 1.0, n); }

/** Random smooth field: coefficients with decaying envelope k^{-2}. */
Field random_field(const DomainPtr& d, std::mt19937_64& rng, bool zero_mean = false) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec c(d->size());
    c[0] = zero_mean ? 0.0 : g(rng);
    for (int k = 1; k < d->size(); k++) c[k] = g(rng) / ((double)k * k);
    return Field::from_coeff(d, std::move(c));
}

} // namespace

TEST_CASE("midpoint nodes and discrete orthonormality") {
    auto d = std::make_shared<Domain>(-1.0, 3.0, 48);
    CHECK(d->weight() == doctest::Approx(4.0 / 48).epsilon(1e-15));
    CHECK(d->node(0) == doctest::Approx(-1.0 + 0.5 * d->weight()).epsilon(1e-15));
    Mat gram = d->weight() * d->eval_matrix().transpose() * d->eval_matrix();
    CHECK((gram - Mat::Identity(48, 48)).cwiseAbs().maxCoeff() < 1e-12);
    Mat sgram = d->weight() * d->sine_matrix().transpose() * d->sine_matrix();
    CHECK((sgram - Mat::Identity(47, 47)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transform round trip is exact") {
    auto d = std::make_shared<Domain>(0.0, M_PI, 64);
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; rep++) {
        Field f = random_field(d, rng);
        Vec back = d->to_nodal(d->to_coeff(f.nodal()));
        CHECK((back - f.nodal()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("eigenfunction is reproduced and scaled by the multiplier") {
    auto d = unit_domain(96);
    FractionalOps ops(d, 0.6);
    Vec c = Vec::Zero(96);
    c[3] = 1.0;
    Field phi3 = Field::from_coeff(d, c);
    Field out = ops.apply_I(phi3);
    double lam = std::pow(d->lambda(3), 0.6);
    CHECK((out.coeff() + lam * c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_I at s=1 matches the Laplacian of an analytic cosine") {
    auto d = std::make_shared<Domain>(0.0, 2.0, 128);
    FractionalOps ops(d, 0.999999999999);
    Vec nodal(128);
    for (int j = 0; j < 128; j++) nodal[j] = std::cos(2.0 * M_PI * d->node(j) / 2.0);
    Field f = Field::from_nodal(d, nodal);
    Field lap = ops.apply_I(f);
    double lam = d->lambda(2);
    CHECK((lap.nodal() + lam * nodal).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("quadratic form, integration by parts, and flux identities") {
    auto d = std::make_shared<Domain>(0.5, 2.5, 64);
    double h = d->weight();
    for (double s : {0.3, 0.55, 0.8}) {
        FractionalOps ops(d, s);
        std::mt19937_64 rng(11);
        for (int rep = 0; rep < 100; rep++) {
            Field f = random_field(d, rng);
            double quad = -h * ops.apply_I(f).nodal().dot(f.nodal());
            CHECK(quad == doctest::Approx(ops.seminorm_sq(f, s)).epsilon(1e-8));
            double ibp = -h * ops.dx_I(f).dot(ops.dx(f));
            CHECK(ibp == doctest::Approx(ops.seminorm_sq(f, s + 1.0)).epsilon(1e-8));
            double flux = h * ops.dx_I(f).squaredNorm();
            CHECK(flux == doctest::Approx(ops.seminorm_sq(f, 2.0 * s + 1.0)).epsilon(1e-8));
        }
    }
}

TEST_CASE("semigroup and derivative-composition identities") {
    auto d = unit_domain(64);
    FractionalOps op_a(d, 0.35), op_b(d, 0.45), op_ab(d, 0.8);
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 100; rep++) {
        Field f = random_field(d, rng);
        Field two = op_b.apply_frac(op_a.apply_frac(f));
        Field one = op_ab.apply_frac(f);
        CHECK((two.coeff() - one.coeff()).cwiseAbs().maxCoeff() <
              1e-8 * std::max(1.0, one.coeff().cwiseAbs().maxCoeff()));

        // div(dx f) equals the spectral Laplacian, with exact zero mass
        Field lap = op_a.div_sine(op_a.dx(f));
        Vec ref = f.coeff();
        for (int k = 0; k < 64; k++) ref[k] *= -d->lambda(k);
        CHECK((lap.coeff() - ref).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(std::abs(lap.coeff()[0]) == 0.0);
    }
}

TEST_CASE("div_sine never creates mass") {
    auto d = std::make_shared<Domain>(0.0, M_PI, 48);
    FractionalOps ops(d, 0.7);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int rep = 0; rep < 50; rep++) {
        Vec flux(48);
        for (int j = 0; j < 48; j++) flux[j] = g(rng);
        CHECK(std::abs(ops.div_sine(flux).mass()) < 1e-13);
    }
}

TEST_CASE("solve_poisson inverts apply_frac on mean-free data") {
    auto d = unit_domain(72);
    FractionalOps ops(d, 0.6);
    std::mt19937_64 rng(19);
    for (int rep = 0; rep < 25; rep++) {
        Field f = random_field(d, rng, true);
        Field u = ops.solve_poisson(ops.apply_frac(f));
        CHECK((u.coeff() - f.coeff()).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK_THROWS(ops.solve_poisson(Field::constant(d, 1.0)));
}

TEST_CASE("seminorm convention at sigma 0 and monotone scaling") {
    auto d = unit_domain(32);
    FractionalOps ops(d, 0.5);
    std::mt19937_64 rng(23);
    Field f = random_field(d, rng);
    double h = d->weight();
    CHECK(ops.seminorm_sq(f, 0.0) == doctest::Approx(h * f.nodal().squaredNorm()).epsilon(1e-12));
    Field shifted = f + Field::constant(d, 3.0);
    CHECK(ops.seminorm_sq(shifted, 0.6) == doctest::Approx(ops.seminorm_sq(f, 0.6)).epsilon(1e-12));
}

TEST_CASE("kernel quadrature reproduces the spectral operator") {
    auto d = unit_domain(64);
    for (double s : {0.3, 0.5, 0.7}) {
        FractionalOps ops(d, s);
        for (int mode : {2, 3}) {
            Vec c = Vec::Zero(64);
            c[mode] = 1.0;
            Field f = Field::from_coeff(d, c);
            Vec approx = ops.kernel_apply(f);
            Vec ref = ops.apply_I(f).nodal();
            double rel = std::sqrt(d->weight() * (approx - ref).squaredNorm() /
                                   (d->weight() * ref.squaredNorm()));
            CHECK(rel < 0.05);
        }
    }
}

TEST_CASE("kernel quadrature error decreases under grid refinement") {
    double errs[2];
    int idx = 0;
    for (int n : {32, 128}) {
        auto d = unit_domain(n);
        FractionalOps ops(d, 0.5);
        Vec c = Vec::Zero(n);
        c[2] = 1.0;
        c[3] = 0.5;
        Field f = Field::from_coeff(d, c);
        Vec approx = ops.kernel_apply(f);
        Vec ref = ops.apply_I(f).nodal();
        errs[idx++] = std::sqrt((approx - ref).squaredNorm() / ref.squaredNorm());
    }
    CHECK(errs[1] < errs[0]);
}
