#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "forcing.hpp"

using namespace tf;

TEST_CASE("constant forcing") {
    auto d = std::make_shared<Domain>(0.0, 2.0, 32);
    FractionalOps ops(d, 0.75);
    ForcingSpec f;
    f.kind = ForcingSpec::Kind::Constant;
    f.s0 = 0.3;
    Field s = f.evaluate(d, 1.7);
    CHECK((s.nodal().array() - 0.3).abs().maxCoeff() < 1e-13);
    CHECK(f.mass_rate(d, 0.0) == doctest::Approx(0.6).epsilon(1e-13));
    CHECK(f.seminorm(ops, 5.0) == 0.0);
    CHECK(f.admissible(ops, 1.3, 10.0, 16));
    f.s0 = -0.1;
    CHECK_FALSE(f.admissible(ops, 1.3, 10.0, 16));
}

TEST_CASE("separable forcing decays like the prescribed profile") {
    auto d = std::make_shared<Domain>(0.0, 1.0, 32);
    FractionalOps ops(d, 0.75);
    ForcingSpec f;
    f.kind = ForcingSpec::Kind::SpaceTime;
    f.a1 = 2.0;
    f.sigma = 1.5;
    f.coeffs.assign(32, 0.0);
    f.coeffs[0] = 1.0;
    f.coeffs[1] = 0.25;
    CHECK(f.time_factor(3.0) == doctest::Approx(2.0 / 16.0).epsilon(1e-13));
    Field s = f.evaluate(d, 3.0);
    CHECK(s.coeff()[1] == doctest::Approx(0.25 * 2.0 / 16.0).epsilon(1e-13));
    double direct = std::sqrt(ops.seminorm_sq(s, 0.75));
    CHECK(f.seminorm(ops, 3.0) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(f.mass_rate(d, 3.0) == doctest::Approx(1.0 * (2.0 / 16.0)).epsilon(1e-12));
}

TEST_CASE("admissibility threshold for spatial forcing") {
    auto d = std::make_shared<Domain>(0.0, M_PI, 64);
    FractionalOps ops(d, 0.75);
    const double c_emb = 1.3;
    ForcingSpec f;
    f.kind = ForcingSpec::Kind::Spatial;
    f.coeffs.assign(64, 0.0);
    f.coeffs[0] = 1.0 * std::sqrt(M_PI); // unit mean
    double limit = f.mass_rate(d, 0.0) / (M_PI * c_emb); // admissible ceiling for [S]_s
    f.coeffs[1] = 0.99 * limit / std::pow(d->lambda(1), 0.375);
    CHECK(f.admissible(ops, c_emb, 10.0, 4));
    f.coeffs[1] *= 1.05;
    CHECK_FALSE(f.admissible(ops, c_emb, 10.0, 4));
}
