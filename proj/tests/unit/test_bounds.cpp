#include "doctest.h"

#include "kinetic/bounds.hpp"
#include "kinetic/grid.hpp"

#include <cmath>

using namespace kinetic;

namespace {
const GridSpec kGrid(24, 6.0);
}

TEST_CASE("exponent windows exactly as printed") {
    // gamma = -2: a1hi window is all p >= 1, aloinf window is empty
    CHECK(window_a1hi(-2.0).contains(7.0));
    CHECK_FALSE(window_aloinf(-2.0).contains(1.0));
    CHECK_THROWS_AS(verify_bound_aloinf(gaussian_field(kGrid, 1, 1), 1.0, LandauParams::make(-2.0)), std::domain_error);

    // gamma = -2.5: aloinf admits [1, 1.2)
    CHECK(window_aloinf(-2.5).contains(1.0));
    CHECK(window_aloinf(-2.5).contains(1.19));
    CHECK_FALSE(window_aloinf(-2.5).contains(1.2)); // boundary rejected

    // a1hi at gamma = -2.5: [1, 6)
    CHECK(window_a1hi(-2.5).hi == doctest::Approx(6.0));
    // agrad at gamma = -2.5: [1, 2)
    CHECK(window_agrad(-2.5).hi == doctest::Approx(2.0));
    // c at gamma = -2.5: [1, 1.2); undefined at gamma = -3
    CHECK(window_c(-2.5).hi == doctest::Approx(1.2));
    CHECK_THROWS_AS(window_c(-3.0), std::domain_error);
}

TEST_CASE("ratios are invariant under h -> lambda h") {
    ScalarField h = gaussian_field(kGrid, 1.0, 1.0);
    auto lp = LandauParams::make(-2.5);

    for (const BoundReport& rep : {verify_bound_a1hi(h, 2.0, lp), verify_bound_aloinf(h, 1.0, lp),
                                   verify_bound_agrad(h, 1.5, lp), verify_bound_c(h, 1.1, lp)}) {
        REQUIRE(rep.samples.size() == 3);
        CHECK(rep.pass);
        for (const auto& s : rep.samples) {
            CHECK(std::isfinite(s.ratio));
            CHECK(s.ratio > 0);
            CHECK(s.ratio == doctest::Approx(rep.samples[0].ratio).epsilon(1e-9));
        }
    }
}

TEST_CASE("aloinf ratio stable across gaussian widths") {
    auto lp = LandauParams::make(-2.5);
    std::vector<double> ratios;
    for (double sigma : {0.5, 1.0, 2.0}) {
        ScalarField h = gaussian_field(kGrid, 1.0, sigma);
        ratios.push_back(bound_sample_aloinf(h, 1.0, lp).ratio);
    }
    for (double r : ratios) {
        CHECK(std::isfinite(r));
        CHECK(r == doctest::Approx(ratios[1]).epsilon(0.2));
    }
}

TEST_CASE("random-field sweep stays within one constant") {
    auto lp = LandauParams::make(-2.5);
    double lo = HUGE_VAL, hi = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        ScalarField h = random_smooth_field(kGrid, seed);
        const double r = bound_sample_aloinf(h, 1.1, lp).ratio;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(hi / lo <= 50.0);
}

TEST_CASE("splitting estimate") {
    SUBCASE("window validation") {
        ScalarField h = gaussian_field(kGrid, 1.0, 1.0);
        CHECK_THROWS_AS(verify_splitting(h, -2.0, 4.0, HUGE_VAL, {1.0}), std::domain_error);
        CHECK_THROWS_AS(verify_splitting(h, 0.5, 1.0, HUGE_VAL, {1.0}), std::domain_error);
        CHECK_THROWS_AS(verify_splitting(h, -2.0, 1.0, 2.0, {1.0}), std::domain_error); // r below pivot
    }

    SUBCASE("zero field: lhs = 0") {
        auto rep = verify_splitting(ScalarField(kGrid), -2.0, 1.0, HUGE_VAL, {0.5, 1.0});
        for (const auto& s : rep.samples) {
            CHECK(s.lhs == 0.0);
            CHECK(s.rhs == 0.0);
        }
    }

    SUBCASE("gaussian: min-over-R bound within a factor 4 of the interpolated product") {
        ScalarField h = gaussian_field(kGrid, 1.0, 1.0);
        auto rep = verify_splitting(h, -2.0, 1.0, HUGE_VAL, {0.5, 1.0, 2.0, 4.0});
        double min_rhs = HUGE_VAL;
        for (const auto& s : rep.samples) min_rhs = std::min(min_rhs, s.rhs);
        // optimizing A R^{-2} + B R over R gives ~1.89 ||h||_1^{1/3} ||h||_inf^{2/3}
        const double interp = std::pow(lp_norm(h, 1.0), 1.0 / 3.0) * std::pow(lp_norm(h, HUGE_VAL), 2.0 / 3.0);
        CHECK(min_rhs <= 4.0 * interp);
        CHECK(min_rhs >= interp / 4.0);
        // and the bound itself holds along the sweep
        for (const auto& s : rep.samples) CHECK(s.lhs <= 10.0 * s.rhs);
    }

    SUBCASE("ratio invariant under h -> lambda h") {
        ScalarField h = gaussian_field(kGrid, 1.0, 1.0);
        auto r1 = verify_splitting(h, -2.0, 1.0, HUGE_VAL, {1.0});
        ScalarField hs = h;
        hs *= 5.0;
        auto r2 = verify_splitting(hs, -2.0, 1.0, HUGE_VAL, {1.0});
        CHECK(r1.samples[0].ratio == doctest::Approx(r2.samples[0].ratio).epsilon(1e-9));
    }
}
