#include "doctest.h"

#include "kinetic/grid.hpp"
#include "kinetic/landau.hpp"
#include "kinetic/reports.hpp"

#include <cmath>
#include <random>

using namespace kinetic;

TEST_CASE("grid spec invariants") {
    CHECK_THROWS(GridSpec(7, 4.0));  // odd
    CHECK_THROWS(GridSpec(4, 4.0));  // too small
    CHECK_THROWS(GridSpec(16, 0.0)); // no extent
    GridSpec g(16, 4.0);
    CHECK(g.spacing() == doctest::Approx(0.5));
    CHECK(g.size() == 4096);
    // origin is a node
    CHECK(g.coord(8) == doctest::Approx(0.0));
}

TEST_CASE("cutoff family") {
    GridSpec g(32, 8.0);

    SUBCASE("plateau and support") {
        ScalarField chi = make_cutoff(g, 1.0);
        CHECK(chi(16, 16, 16) == 1.0); // w = 0
        // |w| = 3 > 2R: identically zero
        CHECK(chi(16 + 12, 16, 16) == 0.0);
        CHECK_THROWS(make_cutoff(g, 0.0));
        CHECK_THROWS(make_cutoff(g, -1.0));
    }

    SUBCASE("gradient scale sup |grad chi_R| * R stable across R") {
        std::vector<double> scaled;
        for (double R : {2.0, 4.0, 8.0}) {
            // refine the grid so the bridge is resolved the same way at each R
            ScalarField chi = make_cutoff(GridSpec(64, 4.0 * R), R);
            auto grad = gradient4(chi);
            double sup = 0;
            for (std::size_t i = 0; i < chi.size(); ++i) {
                Vec3 gv{grad[0][i], grad[1][i], grad[2][i]};
                sup = std::max(sup, gv.norm());
            }
            scaled.push_back(sup * R);
        }
        // analytic max slope of the quintic bridge is 1.875
        for (double s : scaled) CHECK(s == doctest::Approx(1.875).epsilon(0.02));
        CHECK(std::abs(scaled[0] - scaled[2]) / scaled[0] < 0.01);
    }

    SUBCASE("monotone in R") {
        ScalarField c1 = make_cutoff(g, 1.0), c2 = make_cutoff(g, 1.7);
        for (std::size_t i = 0; i < c1.size(); ++i) CHECK(c1[i] <= c2[i] + 1e-15);
    }
}

TEST_CASE("quadrature") {
    GridSpec g(64, 8.0);

    SUBCASE("zero field") {
        CHECK(integrate(ScalarField(g)) == 0.0);
    }

    SUBCASE("gaussian second moment = 3") {
        ScalarField f = gaussian_field(g, 1.0, 1.0);
        CHECK(integrate(f, PolyWeight::one()) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(integrate(f, PolyWeight::abs_w_squared()) == doctest::Approx(3.0).epsilon(1e-4));
    }

    SUBCASE("unit ball volume") {
        // staircase boundary: O(h) error band
        ScalarField ball = ScalarField::sample(g, [](const Vec3& w) { return w.norm() <= 1.0 ? 1.0 : 0.0; });
        const double v = integrate(ball);
        CHECK(v == doctest::Approx(4.0 * M_PI / 3.0).epsilon(0.05));
        ScalarField fine = ScalarField::sample(GridSpec(128, 8.0), [](const Vec3& w) { return w.norm() <= 1.0 ? 1.0 : 0.0; });
        CHECK(std::abs(integrate(fine) - 4.0 * M_PI / 3.0) < std::abs(v - 4.0 * M_PI / 3.0));
    }

    SUBCASE("degree cap") {
        PolyWeight w5{{{5, 0, 0, 1.0}}};
        CHECK_THROWS(integrate(ScalarField(g), w5));
    }

    SUBCASE("odd integrand vanishes to rounding") {
        ScalarField f = ScalarField::sample(g, [](const Vec3& w) {
            return w.x * std::exp(-w.norm2());
        });
        CHECK(std::abs(integrate(f)) < 1e-13);
    }

    SUBCASE("refinement order ~ 2 on a smooth non-decaying field") {
        auto fn = [](const Vec3& w) { return 1.0 / (1.0 + w.norm2()); };
        std::vector<double> ns, errs;
        double ref = integrate(ScalarField::sample(GridSpec(128, 8.0), fn));
        for (int n : {16, 32, 64}) {
            ns.push_back(n);
            errs.push_back(std::abs(integrate(ScalarField::sample(GridSpec(n, 8.0), fn)) - ref));
        }
        const double order = fitted_order(ns, errs);
        CHECK(order >= 1.8);
    }
}

TEST_CASE("dyadic annuli") {
    GridSpec g(64, 8.0);
    auto d = dyadic_annuli(g, 1.0, 0, 2);
    REQUIRE(d.shells.size() == 3);

    SUBCASE("definition of the k = 0 shell") {
        for (auto idx : d.shells[0]) {
            const int ix = static_cast<int>(idx % g.n);
            const int iy = static_cast<int>((idx / g.n) % g.n);
            const int iz = static_cast<int>(idx / (static_cast<std::size_t>(g.n) * g.n));
            const double r = g.node(ix, iy, iz).norm();
            CHECK(r >= 1.0);
            CHECK(r < 2.0);
        }
    }

    SUBCASE("disjoint union covers the grid minus the inner ball") {
        std::vector<char> seen(g.size(), 0);
        std::size_t count = 0;
        for (const auto& shell : d.shells)
            for (auto idx : shell) {
                CHECK(!seen[idx]);
                seen[idx] = 1;
                ++count;
            }
        std::size_t expect = 0;
        for (int iz = 0; iz < g.n; ++iz)
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix) {
                    const double r = g.node(ix, iy, iz).norm();
                    if (r >= 1.0 && r < 8.0) ++expect; // 2^3 * r0 = 8
                }
        CHECK(count == expect);
    }

    SUBCASE("node counts scale like 2^{3k}") {
        std::vector<double> ks, counts;
        for (int k = 0; k <= 2; ++k) {
            ks.push_back(std::pow(2.0, k));
            counts.push_back(static_cast<double>(d.shells[k].size()));
        }
        const double slope = loglog_slope(ks, counts);
        CHECK(slope == doctest::Approx(3.0).epsilon(0.07));
    }

    SUBCASE("empty shells flagged") {
        auto tiny = dyadic_annuli(g, 1.0, 4, 5); // 16 r0 beyond the cube
        CHECK(tiny.empty_flag[1]);
    }
}

TEST_CASE("projection matrix") {
    CHECK_THROWS(projection_pi({0, 0, 0}));
    Sym3 p = projection_pi({1, 0, 0});
    CHECK(p(0, 0) == doctest::Approx(0.0));
    CHECK(p(1, 1) == doctest::Approx(1.0));
    CHECK(p(2, 2) == doctest::Approx(1.0));

    Vec3 z{1, 2, 3};
    Sym3 q = projection_pi(z);
    Vec3 qz = q.apply(z);
    CHECK(qz.norm() < 1e-14);
    CHECK(q.trace() == doctest::Approx(2.0));
}

TEST_CASE("interpolation consistency") {
    GridSpec g(32, 4.0);
    ScalarField f = ScalarField::sample(g, [](const Vec3& w) { return std::exp(-w.norm2()); });
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int k = 0; k < 50; ++k) {
        Vec3 p{u(rng), u(rng), u(rng)};
        const double exact = std::exp(-p.norm2());
        CHECK(f.trilinear(p) == doctest::Approx(exact).epsilon(0.02));
        CHECK(f.tricubic(p) == doctest::Approx(exact).epsilon(0.002));
    }
}
