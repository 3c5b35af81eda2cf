#include <cmath>

#include "doctest.h"
#include "lmc/estimates.hpp"
#include "lmc/presets.hpp"
#include "lmc/rng.hpp"

using namespace lmc;

namespace {
constexpr double kPi = 3.14159265358979323846;

SolveResult solve_const_phase(const Grid& g, double theta_c, const std::string& pot, double p1) {
    const PhaseField theta = make_phase(g, constant_fn(theta_c));
    const AnalyticPotential u_b = presets::potential(pot, p1, 0.0);
    SolveConfig cfg;
    return solve_dirichlet(theta, sample(g, u_b.value), g, cfg);
}
}  // namespace

TEST_SUITE_BEGIN("estimates");

TEST_CASE("jacobi_constant branch values") {
    const JacobiConstant c0 = jacobi_constant(0.0, 0.0, 0.0);
    CHECK(c0.epsilon == 0.0);
    CHECK(c0.C == doctest::Approx(5.0 * kPi * kPi / 8.0).epsilon(1e-15));

    const JacobiConstant chalf = jacobi_constant(kPi / 2, 0.0, 0.0);
    CHECK(chalf.epsilon == doctest::Approx(0.375));
    CHECK(chalf.C == 0.0);

    const JacobiConstant c6 = jacobi_constant(kPi / 6, 3.0, 5.0);
    CHECK(c6.epsilon == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(c6.C == doctest::Approx(5.0 * kPi * kPi / 8.0 + (5.0 * kPi + 4.0) / 2.0 * 5.0).epsilon(1e-14));

    // eps continuous and nondecreasing on [0, pi/2], below the 3/8 branch
    double prev = -1.0;
    for (int k = 0; k <= 100; ++k) {
        const double th = kPi / 2 * k / 100.0 * 0.9999;
        const double e = jacobi_constant(th, 1.0, 1.0).epsilon;
        CHECK(e >= prev);
        CHECK(e <= 0.25 + 1e-15);
        prev = e;
    }
    CHECK(jacobi_constant(kPi / 2, 1.0, 1.0).epsilon == doctest::Approx(0.375));
    CHECK_THROWS_AS(jacobi_constant(kPi, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("choose_constants: documented windows and full ledger validation") {
    // gamma = 0.5, Gamma = 2: threshold (0.5/9344)^3 ~ 1.53e-13
    const double thr = alpha_threshold(0.5, 2.0);
    CHECK(thr == doctest::Approx(1.532e-13).epsilon(1e-3));
    const ConstantLedger led = choose_constants(0.5, 2.0);
    CHECK(led.alpha == doctest::Approx(0.5 * thr).epsilon(1e-15));
    CHECK(led.alpha == doctest::Approx(7.66e-14).epsilon(1e-2));
    CHECK(led.nu == 6.0);
    CHECK(led.q == doctest::Approx(2.0 / 3.0));
    for (const auto& chk : validate_ledger(led)) {
        CAPTURE(chk.name);
        REQUIRE(chk.ok);
    }
    // alpha^{4/3} < beta < alpha by construction
    CHECK(std::pow(led.alpha, 4.0 / 3.0) < led.beta);
    CHECK(led.beta < led.alpha);

    // gamma -> 1-, Gamma = 1: threshold (1/4672)^3
    const ConstantLedger led2 = choose_constants(1.0 - 1e-9, 1.0);
    CHECK(alpha_threshold(1.0, 1.0) == doctest::Approx(std::pow(1.0 / 4672.0, 3)).epsilon(1e-12));
    CHECK(ledger_ok(led2));

    CHECK_THROWS_AS(choose_constants(0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(choose_constants(0.5, 0.5), std::invalid_argument);
}

TEST_CASE("alpha above the threshold leaves no admissible beta") {
    SplitMix64 rng(4242u);
    for (int k = 0; k < 200; ++k) {
        const double gamma = rng.uniform(0.06, 0.94);
        const double Gamma = rng.uniform(1.0, 10.0);
        const double thr = alpha_threshold(gamma, Gamma);
        const double alpha = thr * 1.0001;
        // window (292 a^{4/3}/gamma, a/(16 Gamma)) must be empty
        const double lo = 292.0 * std::pow(alpha, 4.0 / 3.0) / gamma;
        const double hi = alpha / (16.0 * Gamma);
        CHECK(lo >= hi * (1.0 - 1e-9));
        // and strictly below threshold it opens up
        const double alpha_in = thr * 0.5;
        const double lo2 = 292.0 * std::pow(alpha_in, 4.0 / 3.0) / gamma;
        const double hi2 = alpha_in / (16.0 * Gamma);
        CHECK(lo2 < hi2);
    }
}

TEST_CASE("jacobi_report: constant-b instance has defect = C and rejects unsolved input") {
    const Grid g = make_grid({-2, -2}, {4, 4}, 33);
    const SolveResult s = solve_const_phase(g, 0.0, "harmonic_quadratic", 1.0);
    const EstimateReport rep =
        jacobi_report(s.u, make_phase(g, constant_fn(0.0)), interior_region(g, 3), 1e-9, 8.0);
    CHECK(rep.pass);
    // b constant: Delta_g b ~ 0, |grad b|^2 ~ 0, defect ~ C = 5 pi^2/8
    CHECK(rep.worst_defect == doctest::Approx(5.0 * kPi * kPi / 8.0).epsilon(1e-4));

    // unsolved input rejected
    const PhaseField wrong = make_phase(g, constant_fn(0.5));
    CHECK_THROWS_AS(jacobi_report(s.u, wrong, interior_region(g, 3), 1e-9, 8.0),
                    std::invalid_argument);
}

TEST_CASE("jacobi defect field is invariant under (u, Theta) -> (-u, -Theta)") {
    const Grid g = make_grid({-2, -2}, {4, 4}, 33);
    PhaseSpec cb;
    cb.kind = PhaseKind::SignChangingCubic;
    cb.amplitude = 0.1;
    cb.cx = 1.0;
    cb.cy = 0.5;
    const PhaseField theta = build_phase_signed(g, cb);
    const AnalyticPotential u_b = presets::potential("harmonic_quadratic", 0.5, 0.0);
    SolveConfig cfg;
    const SolveResult s = solve_dirichlet(theta, sample(g, u_b.value), g, cfg);

    PhaseSpec cbn = cb;
    cbn.amplitude = -cb.amplitude;
    const PhaseField theta_n = build_phase_signed(g, cbn);
    ScalarField un = s.u.u();
    for (auto& v : un.values) v = -v;
    const PotentialField u_neg(un);

    const ScalarField d1 = jacobi_defect_field(s.u, theta);
    const ScalarField d2 = jacobi_defect_field(u_neg, theta_n);
    double scale = 1.0;
    for (int k = 0; k < g.size(); ++k) scale = std::max(scale, std::abs(d1[k]));
    for (int k = 0; k < g.size(); ++k) REQUIRE(std::abs(d1[k] - d2[k]) <= 1e-12 * scale);
}

TEST_CASE("build_cutoffs: structure exact, paper derivative bounds recorded as violated") {
    const CutoffSet cs = build_cutoffs();
    CHECK(cs.structural_ok);
    CHECK(cs.min_partition_sum >= 1.0 - 1e-12);

    // supports and plateaus exactly as listed
    const double p8 = kPi / 8;
    CHECK(cs.rho[2].supp_lo == doctest::Approx(-3 * p8));
    CHECK(cs.rho[2].plat_lo == doctest::Approx(-2 * p8));
    CHECK(cs.rho[2].plat_hi == doctest::Approx(2 * p8));
    CHECK(cs.rho[2].supp_hi == doctest::Approx(3 * p8));
    CHECK(cs.rho[2].value(0.0) == 1.0);
    CHECK(cs.rho[2].value(3 * p8) == 0.0);
    CHECK(cs.rho[2].value(-3 * p8) == 0.0);
    // plateau overlap at -pi/4: rho2 and rho3 both 1
    CHECK(cs.rho[1].value(-2 * p8) + cs.rho[2].value(-2 * p8) == doctest::Approx(2.0));

    // quintic ramp maxima: |rho'| peaks at 1.875/(pi/8) = 15/pi, which exceeds
    // the quoted 8/pi; |rho''| peaks at ~5.7735/(pi/8)^2 > 64/pi^2. chi: the
    // width-1 descent forces |Dchi| >= 1 > the quoted strict bound.
    CHECK_FALSE(cs.bounds_ok);
    for (int k = 0; k < 5; ++k) {
        const auto& cert = cs.certifications[static_cast<std::size_t>(k)];
        CHECK(cert.max_abs_d1 == doctest::Approx(15.0 / kPi).epsilon(1e-4));
        CHECK_FALSE(cert.d1_ok);
        CHECK(cert.max_abs_d2 == doctest::Approx(10.0 * std::sqrt(3.0) / 3.0 / (p8 * p8)).epsilon(1e-3));
        CHECK_FALSE(cert.d2_ok);
    }
    const auto& chi_cert = cs.certifications[5];
    CHECK(chi_cert.max_abs_d1 == doctest::Approx(1.875).epsilon(1e-6));
    CHECK_FALSE(chi_cert.d1_ok);
    CHECK_FALSE(chi_cert.d2_ok);

    CHECK(sec_csc_bounds_on_supports(cs));
}

TEST_CASE("volume bound constants and reports") {
    const VolumeBoundConstants c = volume_bound_constants(1.0, 0.0, 0.0);
    CHECK(c.C1 == doctest::Approx(2.6131259297527531).epsilon(1e-10));
    CHECK(c.C2 == doctest::Approx(2.0));
    CHECK(c.C3 == doctest::Approx(1.0));
    CHECK(12.0 * c.C1 == doctest::Approx(31.357511157).epsilon(1e-9));

    // flat instance u == 0, Theta == 0: lhs = 1 <= 12 C1
    const Grid g = make_grid({-2, -2}, {4, 4}, 33);
    const PotentialField uzero(ScalarField(g, 0.0));
    const PhaseField tzero = make_phase(g, constant_fn(0.0));
    const EstimateReport flat = volume_bound_report(uzero, tzero, 0.5);
    CHECK(flat.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(flat.pass);

    // u = (x^2+y^2)/2 at R = 1/2 on [-2,2]^2: V = 2 everywhere
    const SolveResult s = solve_const_phase(g, kPi / 2, "isotropic_quadratic", 1.0);
    const EstimateReport iso =
        volume_bound_report(s.u, make_phase(g, constant_fn(kPi / 2)), 0.5);
    CHECK(iso.lhs == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(iso.pass);

    CHECK_THROWS_AS(volume_bound_report(uzero, tzero, 1.5), std::invalid_argument);
}

TEST_CASE("test_function_P: constant-b instance, interior max, rim divergence") {
    const Grid g = make_grid({-2, -2}, {4, 4}, 65);
    const SolveResult s = solve_const_phase(g, 0.0, "harmonic_quadratic", 1.0);
    const PhaseField theta = make_phase(g, constant_fn(0.0));
    const ConstantLedger ledger = choose_constants(0.5, 1.0 + 10.0);
    const TestFunctionResult tr = test_function_P(s.u, theta, ledger, {0.0, 0.0}, 1.0);
    CHECK(std::isfinite(tr.max_value));
    CHECK_FALSE(tr.max_on_rim);
    // b == const: bbar == 0, last term = ln(1/gamma); P <= ln(1/gamma) + small terms
    CHECK(tr.max_value < std::log(1.0 / ledger.gamma) + 1.0);
    CHECK(tr.max_value > -50.0);
}

TEST_CASE("doubling ratio is 1 for constant-Hessian instances with b >= 1") {
    const Grid g = make_grid({-2, -2}, {4, 4}, 33);
    const double t38 = std::tan(3.0 * kPi / 8.0);
    const SolveResult s = solve_const_phase(g, 3.0 * kPi / 4.0, "isotropic_quadratic", t38);
    const PhaseField theta = make_phase(g, constant_fn(3.0 * kPi / 4.0));
    const DoublingResult dr = doubling_report(s.u, theta, {0.0, 0.0}, 1.0);
    // b = 2 ln sec(3pi/8) ~ 1.921 >= 1
    CHECK(dr.sup_half == doctest::Approx(2.0 * std::log(1.0 / std::cos(3.0 * kPi / 8.0))).epsilon(1e-5));
    CHECK(dr.ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("doubling ratio >= 1 on an instance with interior b-variation above 1") {
    const Grid g = make_grid({-2, -2}, {4, 4}, 33);
    const double t38 = std::tan(3.0 * kPi / 8.0);
    const PhaseField theta = make_phase(g, constant_fn(3.0 * kPi / 4.0));
    const ScalarField bnd = sample(g, [&](double x, double y) {
        return 0.5 * t38 * (x * x + y * y) + 0.05 * std::sin(x) * std::sin(y);
    });
    SolveConfig cfg;
    const SolveResult s = solve_dirichlet(theta, bnd, g, cfg);
    const DoublingResult dr = doubling_report(s.u, theta, {0.0, 0.0}, 1.0);
    CHECK(dr.sup_half > 1.0);
    CHECK(dr.ratio >= 1.0 - 1e-12);
    CHECK(std::isfinite(dr.ratio));
}

TEST_CASE("max P stays below a recorded bound while the Hessian grows 10x") {
    const Grid g = make_grid({-2, -2}, {4, 4}, 33);
    double bound_at_first = 0.0;
    for (const double t : {3.0, 10.0, 31.0}) {
        const double theta_c = 2.0 * std::atan(t);
        const PhaseField theta = make_phase(g, constant_fn(theta_c));
        const AnalyticPotential pot = presets::potential("isotropic_quadratic", t, 0.0);
        SolveConfig cfg;
        const SolveResult s = solve_dirichlet(theta, sample(g, pot.value), g, cfg);
        // per-member ledger with its own Gamma = 1 + C^1 norm over B_2
        const Region b2 = ball_region(g, {0.0, 0.0}, 1.8);
        const ScalarField& ux = s.u.d(1, 0);
        const ScalarField& uy = s.u.d(0, 1);
        double c1norm = 0.0;
        for (int k : b2.nodes)
            c1norm = std::max(c1norm, std::abs(s.u.u()[k]) + std::hypot(ux[k], uy[k]));
        const ConstantLedger ledger = choose_constants(0.5, 1.0 + c1norm);
        const TestFunctionResult tr = test_function_P(s.u, theta, ledger, {0.0, 0.0}, 1.0);
        CHECK(std::isfinite(tr.max_value));
        CHECK_FALSE(tr.max_on_rim);
        if (t == 3.0) bound_at_first = tr.max_value + 1.0;
        CHECK(tr.max_value <= bound_at_first);
    }
}

TEST_CASE("doubling family sweep over two radii reports finite ratios") {
    const Grid g = make_grid({-2, -2}, {4, 4}, 33);
    double max_ratio = 0.0;
    for (const double theta_c : {0.0, 3.0 * kPi / 4.0}) {
        const std::string pot = theta_c == 0.0 ? "harmonic_quadratic" : "isotropic_quadratic";
        const double p1 = theta_c == 0.0 ? 1.0 : std::tan(3.0 * kPi / 8.0);
        const SolveResult s = solve_const_phase(g, theta_c, pot, p1);
        const PhaseField theta = make_phase(g, constant_fn(theta_c));
        for (const double r : {0.6, 1.0}) {
            const DoublingResult dr = doubling_report(s.u, theta, {0.0, 0.0}, r);
            REQUIRE(std::isfinite(dr.ratio));
            max_ratio = std::max(max_ratio, dr.ratio);
        }
    }
    CHECK(max_ratio >= 0.5);
    CHECK(max_ratio < 10.0);
}

TEST_CASE("gradient estimate: symmetric instance ratio 0; tilt changes lhs consistently") {
    const Grid g = make_grid({-2, -2}, {4, 4}, 33);
    const SolveResult s = solve_const_phase(g, kPi / 2, "isotropic_quadratic", 1.0);
    const PhaseField theta = make_phase(g, constant_fn(kPi / 2));
    const GradientEstimateResult even = gradient_estimate_report(s.u, theta, 1.0);
    CHECK(even.lhs <= 1e-8);
    CHECK(even.ratio <= 1e-7);

    // tilted instance u + c x solves the same equation
    SolveConfig cfg;
    const AnalyticPotential tilted = presets::potential("isotropic_tilted", 1.0, 0.7);
    const SolveResult st = solve_dirichlet(theta, sample(g, tilted.value), g, cfg);
    const GradientEstimateResult tilt = gradient_estimate_report(st.u, theta, 1.0);
    CHECK(tilt.lhs == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(std::isfinite(tilt.ratio));
    CHECK(tilt.ratio > 0.0);

    // rescaling law: u~(x) = u(Rx)/R^2 has |Du~(0)| = |Du(0)|/R (quadratics are
    // differenced exactly)
    const double R = 2.0;
    const ScalarField u_resc = sample(
        g, [&, R](double x, double y) { return tilted.value(R * x, R * y) / (R * R); });
    const PotentialField ur(u_resc);
    const int c = (g.n - 1) / 2;
    const Vec2 d0 = st.u.grad_at(c, c);
    const Vec2 dr2 = ur.grad_at(c, c);
    CHECK(norm(dr2) == doctest::Approx(norm(d0) / R).epsilon(1e-6));
}

TEST_CASE("sigma2 divergence identity") {
    // quadratic: defect at rounding level
    const Grid g = make_grid({-1, -1}, {2, 2}, 65);
    const PotentialField uq(sample(g, [](double x, double y) { return 1.5 * x * x / 2 + 0.7 * y * y / 2; }));
    const EstimateReport rq = sigma2_divergence_check(uq);
    CHECK(rq.lhs <= 1e-12);

    // x^2 y: O(h^2) with refinement ratio ~ 4
    auto defect_at = [](int n, auto f) {
        const Grid gg = make_grid({-1, -1}, {2, 2}, n);
        const PotentialField u(sample(gg, f));
        return sigma2_divergence_check(u).lhs;
    };
    auto x2y = [](double x, double y) { return x * x * y; };
    const double d1 = defect_at(33, x2y);
    const double d2 = defect_at(65, x2y);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.15));

    auto trig = [](double x, double y) { return std::sin(x) * std::sin(y) + 0.1 * x * x * y; };
    const double t1 = defect_at(33, trig);
    const double t2 = defect_at(65, trig);
    CHECK(t1 / t2 >= 3.5);
    CHECK(t1 / t2 <= 4.5);
}

TEST_SUITE_END();
