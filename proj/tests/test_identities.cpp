#include <cmath>

#include "doctest.h"
#include "lmc/identities.hpp"

using namespace lmc;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE_BEGIN("identities");

TEST_CASE("lemma31_direct: zero and flat-spectrum reductions") {
    FrameSample s;
    CHECK(lemma31_direct(s) == 0.0);

    // lambda = 0: reduces to h111^2 + 3 h112^2 + 3 h122^2 + h222^2
    s.h111 = 1.0;
    s.h112 = -2.0;
    s.h122 = 0.5;
    s.h222 = 3.0;
    CHECK(lemma31_direct(s) == doctest::Approx(1.0 + 3 * 4.0 + 3 * 0.25 + 9.0).epsilon(1e-15));
}

TEST_CASE("dpsi_residual: constrained samples satisfy the constraint; controls do not") {
    const FrameSample s = sample_constrained(7u, 0u);
    const Vec2 r = dpsi_residual(s);
    CHECK(std::abs(r.x) <= 1e-12 * (1.0 + std::abs(s.h111) + std::abs(s.h122)));
    CHECK(std::abs(r.y) <= 1e-12 * (1.0 + std::abs(s.h112) + std::abs(s.h222)));

    // minimal-surface relation: dtheta = 0, h111 = -h122, h222 = -h112
    FrameSample m;
    m.lambda1 = 2.0;
    m.lambda2 = -0.3;
    m.h122 = 1.7;
    m.h111 = -1.7;
    m.h112 = 0.4;
    m.h222 = -0.4;
    const Vec2 rm = dpsi_residual(m);
    CHECK(rm.x == doctest::Approx(0.0));
    CHECK(rm.y == doctest::Approx(0.0));

    // random unconstrained sample: generically nonzero
    FrameSample u = sample_constrained(7u, 1u);
    u.h111 += 1.0;
    const Vec2 ru = dpsi_residual(u);
    CHECK(std::abs(ru.x) > 0.5);
}

TEST_CASE("three-way identity on 1e5 constrained samples") {
    double worst = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const FrameSample s = sample_constrained(20250808u, static_cast<std::uint64_t>(k));
        const double eps = std::sin(s.theta) / 4.0;
        worst = std::max(worst, identity_rel_defect(s, eps));
    }
    CHECK(worst <= 1e-11);
}

TEST_CASE("three-way identity at fixed eps values") {
    for (int k = 0; k < 2000; ++k) {
        const FrameSample s = sample_constrained(99u, static_cast<std::uint64_t>(k));
        CHECK(identity_rel_defect(s, 0.0) <= 1e-11);
        CHECK(identity_rel_defect(s, 0.37) <= 1e-11);
    }
}

TEST_CASE("case1_assembled reduces when cross terms vanish") {
    // eps = 0, dtheta = 0: (h112^2 + h122^2)(4 + sigma1^2) + curvature terms
    FrameSample s;
    s.lambda1 = 1.5;
    s.lambda2 = -0.5;
    s.h112 = 0.7;
    s.h122 = -0.3;
    s.h111 = -s.h122;  // dpsi with dtheta = 0
    s.h222 = -s.h112;
    s.d2theta_diag = {0.4, -0.2};
    const double s1 = s.lambda1 + s.lambda2;
    const double expect = (0.49 + 0.09) * (4.0 + s1 * s1) +
                          (1.0 / (1.0 + 2.25)) * 1.5 * 0.4 + (1.0 / 1.25) * (-0.5) * (-0.2);
    CHECK(case1_assembled(s, 0.0) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("reflection leaves the assembled value invariant") {
    for (int k = 0; k < 5000; ++k) {
        const FrameSample s = sample_constrained(31u, static_cast<std::uint64_t>(k));
        const FrameSample r = reflect_sample(s);
        const double eps = std::sin(std::abs(s.theta)) / 4.0;
        const double a = case1_assembled(s, eps);
        const double b = case1_assembled(r, eps);
        CHECK(a == doctest::Approx(b).epsilon(1e-11).scale(1.0 + std::abs(a)));
        CHECK(lemma31_direct(s) ==
              doctest::Approx(lemma31_direct(r)).epsilon(1e-11).scale(1.0 + std::abs(lemma31_direct(s))));
        CHECK(gradnorm_direct(s) ==
              doctest::Approx(gradnorm_direct(r)).epsilon(1e-11).scale(1.0 + std::abs(gradnorm_direct(s))));
    }
}

TEST_CASE("discriminant certificate") {
    // sharp at theta = pi/2
    const DiscriminantResult end = discriminant_check(kPi / 2);
    CHECK(end.quartic == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(end.ok);

    // theta = pi/6: 23 - 4 - 15/4
    const DiscriminantResult mid = discriminant_check(kPi / 6);
    CHECK(mid.quartic == doctest::Approx(15.25).epsilon(1e-13));
    CHECK(mid.ok);

    for (int k = 1; k <= 10000; ++k) {
        const DiscriminantResult r = discriminant_check(kPi / 2 * k / 10000.0);
        REQUIRE(r.ok);
        REQUIRE(r.quartic >= -1e-12);
    }
    CHECK_THROWS_AS(discriminant_check(0.0), std::invalid_argument);
    CHECK_THROWS_AS(discriminant_check(2.0), std::invalid_argument);
}

TEST_CASE("case-1 certificate holds on the sign regime with equation-linked theta") {
    for (int k = 0; k < 30000; ++k) {
        const FrameSample s = sample_case1(555u, static_cast<std::uint64_t>(k));
        const CertificateResult r = case1_certificate(s);
        if (!r.pass) {
            CAPTURE(s.lambda1);
            CAPTURE(s.lambda2);
            CAPTURE(s.theta);
            CAPTURE(r.defect);
        }
        REQUIRE(r.pass);
    }
}

TEST_CASE("case-2 certificate and the displayed half-gradnorm bound") {
    for (int k = 0; k < 30000; ++k) {
        const FrameSample s = sample_case2(777u, static_cast<std::uint64_t>(k));
        REQUIRE(s.theta > kPi / 2);
        REQUIRE(s.theta < kPi);
        REQUIRE(s.lambda2 > 0.0);
        const CertificateResult r = case2_certificate(s);
        if (!r.pass) {
            CAPTURE(s.lambda1);
            CAPTURE(s.lambda2);
            CAPTURE(s.theta);
        }
        REQUIRE(r.pass);
        REQUIRE(case2_half_gradnorm_display(s).pass);
    }
}

TEST_CASE("certificates pass on reflected samples iff on originals") {
    for (int k = 0; k < 5000; ++k) {
        const FrameSample s = sample_case1(888u, static_cast<std::uint64_t>(k));
        const FrameSample r = reflect_sample(s);
        // reflecting twice restores the original sample
        const CertificateResult orig = case1_certificate(s);
        const CertificateResult back = case1_certificate(reflect_sample(r));
        CHECK(orig.pass == back.pass);
        CHECK(orig.defect == doctest::Approx(back.defect).epsilon(1e-12).scale(orig.scale));
    }
}

TEST_CASE("appendix lambda2 inequality") {
    CHECK(appendix_lambda2_check(1.0));  // endpoint equality f(1) = 0
    CHECK(appendix_lambda2_check(0.5));  // arctan(1/2) ~ 0.46365 >= pi/8 ~ 0.39270
    CHECK(std::atan(0.5) >= kPi / 8);
    for (int k = 1; k <= 10000; ++k) REQUIRE(appendix_lambda2_check(k / 10000.0));
    // interior maximum at sqrt(4/pi - 1) ~ 0.5227
    CHECK(std::sqrt(4.0 / kPi - 1.0) == doctest::Approx(0.5227).epsilon(1e-4));
    CHECK_THROWS_AS(appendix_lambda2_check(0.0), std::invalid_argument);
}

TEST_CASE("appendix lambda1 inequality with C(p) = 2^{p/2} pi / p") {
    // p = 1: C = sqrt(2) pi; at y = 1 the bound reads pi >= pi/4
    const double C1 = std::pow(2.0, 0.5) * kPi;
    CHECK(C1 * 1.0 / std::sqrt(2.0) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(appendix_lambda1_check(1.0, 1.0));
    CHECK(appendix_lambda1_check(0.0, 0.5));  // anchor f(0) = 0
    for (int i = 0; i <= 100; ++i)
        for (int j = 1; j <= 100; ++j) REQUIRE(appendix_lambda1_check(i / 100.0, j / 100.0));
}

TEST_CASE("chain_to_b_check link-by-link") {
    CHECK_THROWS_AS(chain_to_b_check(1.0, 0.0, 1.0), std::invalid_argument);

    // lambda = (2, 0), p = 1: V = sqrt 5, b = ln sqrt 5; all links hold
    const ChainReport r = chain_to_b_check(2.0, 0.0, 1.0);
    CHECK(r.V == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    CHECK(r.b == doctest::Approx(0.5 * std::log(5.0)).epsilon(1e-15));
    CHECK(r.arctan_link);
    CHECK(r.pairing_link);
    CHECK(r.power_link);
    CHECK(r.log_power_applicable);
    CHECK(r.log_link);
    CHECK(r.bbar_link);
    CHECK(r.conjunction);

    // lambda = (10, 10): b = log(101) exceeds V^{1/8}; the log-power step is
    // inapplicable and reported as such
    const ChainReport big = chain_to_b_check(10.0, 10.0, 1.0);
    CHECK(big.arctan_link);
    CHECK(big.pairing_link);
    CHECK(big.power_link);
    CHECK_FALSE(big.log_power_applicable);
    CHECK_FALSE(big.conjunction);
}

TEST_CASE("mvt_lemma_check profiles") {
    const double xstar = std::sqrt(4.0 / kPi - 1.0);
    CHECK(mvt_lemma_check(MvtProfile::ArctanMinusLine, 0.0, xstar));
    CHECK(mvt_lemma_check(MvtProfile::PowerMinusArctan, 0.0, 1.0, 0.5));
    CHECK(mvt_lemma_check(MvtProfile::Zero, 0.0, 1.0));
    // f' changes sign past xstar, so the monotone scan must fail there
    CHECK_FALSE(mvt_lemma_check(MvtProfile::ArctanMinusLine, 0.0, 1.0));
}

TEST_SUITE_END();
