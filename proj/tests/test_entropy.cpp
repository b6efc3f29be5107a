#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "entropy.hpp"

using namespace tf;

TEST_CASE("closed-form entropy values at reference points") {
    EntropyParams p{.n = 3.0, .eps = 0.0, .anchor = 1.0};
    CHECK(entropy_value(2.0, p) == doctest::Approx(0.25).epsilon(1e-12));
    EntropyParams p2{.n = 2.0, .eps = 0.0, .anchor = 1.0};
    CHECK(entropy_prime(2.0, p2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(entropy_value(2.0, p2) == doctest::Approx(2.0 - std::log(2.0) - 1.0).epsilon(1e-12));
    EntropyParams p1{.n = 1.0, .eps = 0.0, .anchor = 2.0};
    CHECK(entropy_value(2.0, p1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(entropy_value(0.0, p1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("anchor is a double root and the density is nonnegative") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> un(1.2, 4.0), ua(0.3, 3.0), uz(0.01, 6.0);
    for (int i = 0; i < 200; i++) {
        EntropyParams p{.n = un(rng), .eps = 0.0, .anchor = ua(rng)};
        CHECK(std::abs(entropy_value(p.anchor, p)) < 1e-12);
        CHECK(std::abs(entropy_prime(p.anchor, p)) < 1e-12);
        CHECK(entropy_value(uz(rng), p) >= -1e-13);
    }
    EntropyParams p{.n = 2.5, .eps = 0.0, .anchor = 1.0};
    CHECK(std::isinf(entropy_value(-0.5, p)));
    CHECK(std::isinf(entropy_value(0.0, p)));
    EntropyParams plo{.n = 1.5, .eps = 0.0, .anchor = 1.0};
    CHECK(std::isfinite(entropy_value(0.0, plo)));
}

TEST_CASE("regularized density against an independent nested-quadrature oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> un(1.2, 3.5), uz(-1.0, 4.0);
    for (int i = 0; i < 25; i++) {
        EntropyParams p{.n = un(rng), .eps = 1e-3, .anchor = 1.0};
        double z = uz(rng);
        auto inner = [&](double r) {
            auto f = [&](double t) { return 1.0 / mobility(t, p); };
            if (r < 0.0) return adaptive_quad(f, p.anchor, 0.0, 1e-12) +
                                adaptive_quad(f, 0.0, r, 1e-12);
            return adaptive_quad(f, p.anchor, r, 1e-12);
        };
        double oracle;
        if (z < 0.0)
            oracle = adaptive_quad(inner, p.anchor, 0.0, 1e-11) +
                     adaptive_quad(inner, 0.0, z, 1e-11);
        else
            oracle = adaptive_quad(inner, p.anchor, z, 1e-11);
        CHECK(entropy_value_eps(z, p) ==
              doctest::Approx(oracle).epsilon(1e-7).scale(std::max(1.0, std::abs(oracle))));
        CHECK(entropy_prime_eps(z, p) == doctest::Approx(inner(z)).epsilon(1e-9));
    }
}

TEST_CASE("regularized density converges to the closed form as eps vanishes") {
    EntropyParams p{.n = 2.0, .eps = 0.0, .anchor = 1.5};
    double prev = 1e300;
    for (double eps : {1e-4, 1e-6, 1e-8}) {
        EntropyParams pe = p;
        pe.eps = eps;
        double err = std::abs(entropy_value_eps(0.4, pe) - entropy_value(0.4, p));
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("derivative bound on states above a positive floor") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> un(1.5, 3.0), uv(0.1, 0.8), uz(0.0, 5.0);
    for (int i = 0; i < 200; i++) {
        EntropyParams p{.n = un(rng), .eps = 1e-6, .anchor = 1.0};
        double v = uv(rng); // floor below the anchor
        double z = v + uz(rng);
        double bound = std::pow(v, 1.0 - p.n) / (p.n - 1.0);
        CHECK(std::abs(entropy_prime_eps(z, p)) <= bound * (1.0 + 1e-10));
    }
}

TEST_CASE("mobility and its derivative") {
    EntropyParams p{.n = 2.5, .eps = 1e-4, .anchor = 1.0};
    CHECK(mobility(0.0, p) == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK(mobility(-3.0, p) == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK(mobility_prime(-1.0, p) == 0.0);
    for (double z : {0.3, 1.0, 2.7}) {
        double fd = (mobility(z + 1e-6, p) - mobility(z - 1e-6, p)) / 2e-6;
        CHECK(mobility_prime(z, p) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("nodal entropy integral and energy report") {
    auto d = std::make_shared<Domain>(0.0, 2.0, 64);
    FractionalOps ops(d, 0.7);
    EntropyParams p{.n = 2.0, .eps = 0.0, .anchor = 0.8};
    CHECK(std::abs(entropy_integral(Field::constant(d, 0.8), p)) < 1e-13);

    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    Vec c = Vec::Zero(64);
    c[0] = 1.5 * std::sqrt(2.0);
    for (int k = 1; k < 64; k++) c[k] = 0.1 * g(rng) / (k * k);
    Field u = Field::from_coeff(d, c);
    EntropyParams pe{.n = 2.0, .eps = 1e-5, .anchor = 1.0};
    EnergyReport r = energy_report(ops, u, pe);
    CHECK(r.energy == doctest::Approx(ops.seminorm_sq(u, 0.7)).epsilon(1e-12));
    CHECK(r.dissipation >= pe.eps * ops.seminorm_sq(u, 2.0 * 0.7 + 1.0) * (1.0 - 1e-10));
}
