#include "doctest.h"

#include "cpflow/error.hpp"
#include "cpflow/profiles.hpp"
#include "cpflow/spectral.hpp"

#include <cmath>
#include <random>

using namespace cpflow;

TEST_CASE("eval_profile values") {
    const auto v = eval_profile(Profile(-1, 0, 3), 0.0);
    CHECK(v.F == 3.0);
    CHECK(v.Fp == 0.0);
    CHECK(v.Fpp == -6.0);

    const auto c = eval_profile(Profile(0, 1, 1), -1.0);
    CHECK(c.F == 0.0);
    CHECK(c.Fp == 1.0);
    CHECK(c.Fpp == 0.0);

    CHECK(eval_profile(Profile(-0.3, 0.7, 2.5), 0.0).F == 2.5);
    CHECK_THROWS_AS(eval_profile(Profile(-1, 0, 3), 1.0001), DomainError);
    CHECK_THROWS_AS(Profile(0, 0, 0), DomainError);
}

TEST_CASE("admissibility classification") {
    const auto pois = check_admissibility(Profile(-1, 0, 3));
    CHECK(pois.satisfies_abc);
    CHECK_FALSE(pois.reversal);
    CHECK(pois.flux == 4.0);
    CHECK(pois.positive_interior);

    const auto plug = check_admissibility(Profile(0, 0, 1));
    CHECK(plug.satisfies_abc);
    CHECK(plug.flux == 2.0);

    const auto neutral = check_admissibility(Profile(-1924.07, 0, 5771.96));
    CHECK_FALSE(neutral.satisfies_abc);
    CHECK(neutral.reversal);

    // A > 0 is representable but never admissible
    CHECK_FALSE(check_admissibility(Profile(0.5, 0, 1)).satisfies_abc);
}

TEST_CASE("reversal detected in a thin wall layer") {
    // F(+-1) = -1e-4, F(0) > 0: sign change confined to |y| > 1 - O(1e-5)
    const Profile p(-1.0, 0.0, 3.0 - 1e-4);
    const auto r = check_admissibility(p);
    CHECK(r.reversal);
    CHECK_FALSE(r.satisfies_abc);
    CHECK(r.min_F_interior == doctest::Approx(-1e-4).epsilon(1e-9));
}

TEST_CASE("poiseuille_for_flux") {
    const Profile p = poiseuille_for_flux(4.0);
    CHECK(p.A() == -1.0);
    CHECK(p.B() == 0.0);
    CHECK(p.C() == 3.0);
    CHECK(poiseuille_for_flux(1.0).F(0.0) == 0.75);
    CHECK_THROWS_AS(poiseuille_for_flux(0.0), DomainError);
    CHECK_THROWS_AS(poiseuille_for_flux(-2.0), DomainError);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.01, 100.0);
    for (int i = 0; i < 50; ++i) {
        const double phi = u(rng);
        CHECK(poiseuille_for_flux(phi).flux() == doctest::Approx(phi).epsilon(1e-15));
    }
}

TEST_CASE("base pressure gradient") {
    CHECK(base_pressure_gradient(Profile(-1, 0, 3)) == -6.0);
    CHECK(base_pressure_gradient(Profile(0, 1, 1)) == 0.0);
    CHECK(base_pressure_gradient(Profile(-2, 0.3, 9)) == -12.0);
}

TEST_CASE("flux equals quadrature of F") {
    const auto grid = SpectralGrid::make(16);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const Profile p(n(rng), n(rng), n(rng));
        const auto F = GridFunction::sample(grid, [&](double y) { return cplx(p.F(y), 0.0); });
        CHECK(grid->integrate(F.values).real() == doctest::Approx(p.flux()).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("admissible profiles are positive inside and non-negative at the walls") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tested = 0;
    while (tested < 200) {
        const double A = -5.0 * u(rng);
        const double C = 10.0 * u(rng);
        const double bmax = 3.0 * A + C;
        if (bmax < 0.0) continue;
        const double B = bmax * (2.0 * u(rng) - 1.0);
        if (A == 0.0 && B == 0.0 && C == 0.0) continue;
        const Profile p(A, B, C);
        const auto r = check_admissibility(p);
        REQUIRE(r.satisfies_abc);
        CHECK_FALSE(r.reversal);
        CHECK(p.F(1.0) >= -1e-12);
        CHECK(p.F(-1.0) >= -1e-12);
        for (int j = 1; j < 400; ++j) CHECK(p.F(-1.0 + j / 200.0) > 0.0);
        CHECK(2 * A + B + 2 * C > 0.0);
        ++tested;
    }
}
