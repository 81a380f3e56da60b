#include "doctest.h"

#include "kinetic/grid.hpp"
#include "kinetic/profile.hpp"

#include <cmath>

using namespace kinetic;

namespace {
const GridSpec kW(32, 8.0);
const GridSpec kY(16, 8.0);

ProfileDecomposition gaussian_profile(double mass = 1.0, double sigma = 1.0) {
    return ProfileDecomposition::homogeneous(gaussian_field(kW, mass, sigma));
}

ProfileDecomposition separable_profile() {
    SeparableTerm t;
    t.a = gaussian_field(kY, 1.0, 1.2);
    t.b = gaussian_field(kW, 1.0, 1.0);
    return ProfileDecomposition::with_h(ScalarField(kW), {std::move(t)});
}
} // namespace

TEST_CASE("profile admissibility") {
    SUBCASE("zero profile passes with zero norms") {
        auto rep = check_profile_admissibility(ProfileDecomposition::homogeneous(ScalarField(kW)), {-2.5, 0.2});
        CHECK(rep.pass);
        CHECK(rep.norms.front().final_value == 0.0);
    }

    SUBCASE("gaussian q and product h pass; L1 close to closed form") {
        SeparableTerm t;
        t.a = gaussian_field(kY, 2.0, 1.0);
        t.b = gaussian_field(kW, 1.5, 1.0);
        auto g = ProfileDecomposition::with_h(gaussian_field(kW, 1.0, 1.0), {std::move(t)});
        auto rep = check_profile_admissibility(g, {-2.5, 0.2});
        CHECK(rep.pass);
        // ||q||_1 = 1, ||h||_1 = 3
        for (const auto& c : rep.norms) {
            if (c.name == "L1(q)") CHECK(c.final_value == doctest::Approx(1.0).epsilon(1e-3));
            if (c.name == "L1(h)") CHECK(c.final_value == doctest::Approx(3.0).epsilon(1e-3));
        }
    }

    SUBCASE("|y|^-2 tail fails the |y| h norm") {
        SeparableTerm t;
        t.a = ScalarField::sample(kY, [](const Vec3& y) { return 1.0 / (0.25 + y.norm2()); });
        t.b = gaussian_field(kW, 1.0, 1.0);
        auto g = ProfileDecomposition::with_h(ScalarField(kW), {std::move(t)});
        auto rep = check_profile_admissibility(g, {-2.5, 0.2});
        CHECK_FALSE(rep.pass);
        bool flagged = false;
        for (const auto& c : rep.norms)
            if (c.name == "L1(|y| h)" && !c.cauchy) flagged = true;
        CHECK(flagged);
    }

    SUBCASE("theta = 1/3 adds the higher moments") {
        auto rep = check_profile_admissibility(gaussian_profile(), {-2.5, 1.0 / 3.0});
        bool has_q2 = false;
        for (const auto& c : rep.norms) has_q2 |= c.name == "L1((1+|w|^2) q)";
        CHECK(has_q2);
    }
}

TEST_CASE("profile residual") {
    SUBCASE("zero profile gives zero residual") {
        CHECK(landau_profile_residual(ProfileDecomposition::homogeneous(ScalarField(kW)), {-2.5, 0.2}).max_abs() == 0.0);
    }

    SUBCASE("homogeneous gaussian: integral of the residual is (1-3 theta) m") {
        SelfSimParams p{-2.5, 0.2};
        ScalarField r = landau_profile_residual(gaussian_profile(), p);
        CHECK(integrate(r) == doctest::Approx(0.4).epsilon(2.5e-3)); // |err| <= 1e-3
    }

    SUBCASE("theta = 1/3: |w|^2 moment of the residual is -2") {
        SelfSimParams p{-2.5, 1.0 / 3.0};
        ScalarField r = landau_profile_residual(gaussian_profile(), p);
        CHECK(integrate(r, PolyWeight::abs_w_squared()) == doctest::Approx(-2.0).epsilon(5e-3));
    }

    SUBCASE("homogeneous reduction equals the general residual at any y") {
        SelfSimParams p{-2.5, 0.2};
        auto hom = ProfileDecomposition::homogeneous(gaussian_field(kW, 1.0, 1.0));
        ScalarField r0 = landau_profile_residual(hom, p, {});
        ScalarField r1 = landau_profile_residual(hom, p, {1.7, -0.4, 0.9});
        for (std::size_t i = 0; i < r0.size(); ++i) CHECK(r0[i] == r1[i]);
    }
}

TEST_CASE("moment functional coefficients") {
    CHECK(moment_coefficient_q(0.2, false) == doctest::Approx(0.4));
    CHECK(moment_coefficient_q(1.0 / 3.0, true) == doctest::Approx(-2.0 / 3.0));
    CHECK(moment_coefficient_q(-1.0 / 3.0, true) == doctest::Approx(8.0 / 3.0));
    CHECK(moment_coefficient_h(0.2, false) == doctest::Approx(-3.2));
    CHECK(moment_coefficient_h(1.0 / 3.0, true) == doctest::Approx(-14.0 / 3.0));
    CHECK(moment_coefficient_h(-1.0 / 3.0, true) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("moment functional limits") {
    MomentFunctionalSpec spec;
    spec.w_radii = {2.4, 3.2, 4.2, 5.6};
    spec.y_scales = {1.0};

    SUBCASE("zero profile gives zero functional") {
        auto res = moment_functional(ProfileDecomposition::homogeneous(ScalarField(kW)), {-2.5, 0.2}, spec);
        CHECK(std::abs(res.measured) <= 1e-12);
    }

    SUBCASE("theta = 0.2 gaussian: limit = 0.4 within 2%") {
        auto res = moment_functional(gaussian_profile(), {-2.5, 0.2}, spec);
        CHECK(res.predicted == doctest::Approx(0.4).epsilon(1e-4));
        CHECK(res.measured == doctest::Approx(0.4).epsilon(0.02));
        CHECK(res.pass);
    }

    SUBCASE("theta = -1/3 gaussian with |w|^2 weight: limit = 8 within 2%") {
        MomentFunctionalSpec s2 = spec;
        s2.weight_w2 = true;
        auto res = moment_functional(gaussian_profile(), {-3.0, -1.0 / 3.0}, s2);
        CHECK(res.predicted == doctest::Approx(8.0).epsilon(1e-3));
        CHECK(res.measured == doctest::Approx(8.0).epsilon(0.02));
    }

    SUBCASE("pure-h profile with y-cutoffs reproduces -2(1+3 theta)") {
        MomentFunctionalSpec s2 = spec;
        s2.window = YWindowKind::Cutoff;
        s2.y_scales = {2.4, 3.2, 4.2, 5.6};
        SelfSimParams p{-2.5, 0.2};
        auto res = moment_functional(separable_profile(), p, s2, {}, 0.03);
        CHECK(res.predicted == doctest::Approx(-3.2).epsilon(1e-3));
        CHECK(res.measured == doctest::Approx(res.predicted).epsilon(0.03));
    }

    SUBCASE("y-cutoff window rejects profiles with q != 0") {
        MomentFunctionalSpec s2 = spec;
        s2.window = YWindowKind::Cutoff;
        CHECK_THROWS(moment_functional(gaussian_profile(), {-2.5, 0.2}, s2));
    }

    SUBCASE("plateau-shape independence") {
        MomentFunctionalSpec s_quintic = spec, s_cos = spec;
        s_cos.plateau = PlateauShape::Cosine;
        // use a profile with actual y dependence so the plateau matters
        SeparableTerm t;
        t.a = gaussian_field(kY, 1.0, 1.2);
        t.b = gaussian_field(kW, 0.5, 1.0);
        auto g = ProfileDecomposition::with_h(gaussian_field(kW, 1.0, 1.0), {std::move(t)});
        s_quintic.y_scales = s_cos.y_scales = {2.0, 3.0, 4.5};
        SelfSimParams p{-2.5, 0.2};
        auto r1 = moment_functional(g, p, s_quintic);
        auto r2 = moment_functional(g, p, s_cos);
        CHECK(r1.measured == doctest::Approx(r2.measured).epsilon(0.02));
    }
}

TEST_CASE("refutation verdicts") {
    SUBCASE("trivial profile is consistent") {
        auto v = refutation_verdict(ProfileDecomposition::homogeneous(ScalarField(kW)), {-2.5, 0.2});
        CHECK(v.verdict == "consistent (trivial profile)");
        CHECK_FALSE(v.refuted);
    }

    SUBCASE("positive gaussian at theta = 0.2 is refuted") {
        auto v = refutation_verdict(gaussian_profile(), {-2.5, 0.2});
        CHECK(v.refuted);
        CHECK(v.measured == doctest::Approx(0.4).epsilon(0.02));
        CHECK(v.to_json().find("refuted") != std::string::npos);
    }

    SUBCASE("positive q at theta = 1/3 is refuted via the |w|^2 moment") {
        auto v = refutation_verdict(gaussian_profile(), {-2.5, 1.0 / 3.0});
        CHECK(v.refuted);
        CHECK(v.case_name == "weight-|w|^2");
        CHECK(v.measured == doctest::Approx(-2.0).epsilon(0.02));
    }
}
