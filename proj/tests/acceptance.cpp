// Acceptance suite: one criterion per --criterion value, one PASS/FAIL line
// each. Every tolerance is pinned here; the process exits nonzero if any
// selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lmc/estimates.hpp"
#include "lmc/identities.hpp"
#include "lmc/presets.hpp"
#include "lmc/rng.hpp"
#include "lmc/runner.hpp"
#include "lmc/solver.hpp"

using namespace lmc;

namespace {

constexpr double kPi = 3.14159265358979323846;

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct SolvedInstance {
    cli::InstanceSpec spec;
    cli::BuiltInstance built;
    SolveResult sol;
};

std::vector<SolvedInstance> solve_corpus(int level) {
    std::vector<SolvedInstance> out;
    for (const auto& spec : cli::corpus_instances(65, 2)) {
        SolvedInstance si;
        si.spec = spec;
        si.built = cli::build_instance(spec, level);
        SolveConfig cfg;
        si.sol = solve_dirichlet(si.built.theta, si.built.boundary, si.built.grid, cfg);
        out.push_back(std::move(si));
    }
    return out;
}

const std::vector<SolvedInstance>& corpus_level(int level) {
    static std::vector<SolvedInstance> lv0;
    static std::vector<SolvedInstance> lv1;
    auto& slot = level == 0 ? lv0 : lv1;
    if (slot.empty()) slot = solve_corpus(level);
    return slot;
}

// --------------------------------------------------------------------------

bool criterion_1() {
    const double t0 = now_s();
    const int N = 100000;
    double worst = 0.0;
    int failures = 0;
    for (int k = 0; k < N; ++k) {
        const FrameSample s = sample_constrained(20250808u, static_cast<std::uint64_t>(k));
        const double eps = std::sin(s.theta) / 4.0;
        const double d = identity_rel_defect(s, eps);
        worst = std::max(worst, d);
        if (d > 1e-11) ++failures;
    }
    const double dt = now_s() - t0;
    std::printf("  1e5 constrained samples: max relative defect %.3e, failures %d, %.2f s\n", worst,
                failures, dt);
    return failures == 0 && worst <= 1e-11 && dt <= 30.0;
}

bool criterion_2() {
    double qmin = 1e300, q_at_end = 0.0;
    bool all_ok = true;
    for (int k = 1; k <= 10000; ++k) {
        const double th = kPi / 2 * k / 10000.0;
        const DiscriminantResult r = discriminant_check(th);
        qmin = std::min(qmin, r.quartic);
        all_ok = all_ok && r.ok;
        if (k == 10000) q_at_end = r.quartic;
    }
    std::printf("  min quartic over scan %.3e, value at pi/2 %.3e\n", qmin, q_at_end);
    return all_ok && qmin >= -1e-12 && std::abs(q_at_end) <= 1e-12;
}

bool criterion_3() {
    bool ok = true;
    for (int k = 1; k <= 10000; ++k) ok = ok && appendix_lambda2_check(k / 10000.0);
    for (int i = 0; i <= 100; ++i)
        for (int j = 1; j <= 100; ++j) ok = ok && appendix_lambda1_check(i / 100.0, j / 100.0);
    // C(p) = 2^{p/2} pi / p; at p = 1 the bound at y = 1 reads pi vs pi/4
    const double C_half = std::pow(2.0, 0.25) * kPi / 0.5;
    ok = ok && std::abs(C_half - 2.0 * std::pow(2.0, 0.25) * kPi) <= 1e-14 * C_half;
    const double C1 = std::pow(2.0, 0.5) * kPi;
    const double lhs_at_1 = C1 * 1.0 / std::pow(2.0, 0.5);
    std::printf("  p=1, y=1: bound %.15f vs arctan(1) = %.15f\n", lhs_at_1, kPi / 4);
    ok = ok && std::abs(lhs_at_1 - kPi) <= 1e-14 && lhs_at_1 > kPi / 4;
    return ok;
}

bool criterion_4() {
    const double t0 = now_s();
    const AnalyticPotential u_star = presets::potential("sin_bump", 0.1, 0.0);
    std::vector<double> errors;
    bool residual_ok = true;
    for (int n : {65, 129, 257}) {
        const Grid g = make_grid({-1, -1}, {2, 2}, n);
        const ManufacturedProblem mp = manufactured_problem(g, u_star);
        SolveConfig cfg;
        const SolveResult s = solve_dirichlet(mp.theta, mp.boundary, g, cfg);
        residual_ok = residual_ok && s.residual_sup <= 1e-10;
        double err = 0.0;
        for (int k = 0; k < g.size(); ++k)
            err = std::max(err, std::abs(s.u.u()[k] - mp.u_exact[k]));
        errors.push_back(err);
        std::printf("  n=%3d: residual %.2e, max error %.4e\n", n, s.residual_sup, err);
    }
    const double o1 = std::log2(errors[0] / errors[1]);
    const double o2 = std::log2(errors[1] / errors[2]);
    const double dt = now_s() - t0;
    std::printf("  observed orders %.3f, %.3f; elapsed %.1f s\n", o1, o2, dt);
    return residual_ok && o1 >= 1.7 && o1 <= 2.3 && o2 >= 1.7 && o2 <= 2.3 && dt <= 120.0;
}

bool criterion_5() {
    // min interior defect >= -K h with the same K (within factor 2) at h, h/2.
    // K_floor absorbs rounding/solver-noise-level defects (well below any
    // genuine O(1) violation of the inequality).
    const double K_floor = 1e-3;
    bool ok = true;
    double K_recorded = 0.0;
    for (int idx = 0; idx < 8; ++idx) {
        const SolvedInstance& a = corpus_level(0)[idx];
        const SolvedInstance& b = corpus_level(1)[idx];
        auto min_defect = [](const SolvedInstance& si) {
            const ScalarField d = jacobi_defect_field(si.sol.u, si.built.theta);
            return field_min(d, interior_region(si.built.grid, 3));
        };
        const double m0 = min_defect(a), m1 = min_defect(b);
        const double K0 = std::max({0.0, -m0 / a.built.grid.h});
        const double K1 = std::max({0.0, -m1 / b.built.grid.h});
        const double Kt0 = std::max(K0, K_floor), Kt1 = std::max(K1, K_floor);
        const bool same_K = Kt1 <= 2.0 * Kt0 && Kt0 <= 2.0 * Kt1;
        K_recorded = std::max({K_recorded, Kt0, Kt1});
        std::printf("  %-10s minD(h)=%+.3e minD(h/2)=%+.3e K=%.2e K'=%.2e %s\n",
                    a.spec.name.c_str(), m0, m1, K0, K1, same_K ? "ok" : "VIOLATION");
        ok = ok && same_K && m0 >= -Kt0 * a.built.grid.h && m1 >= -2.0 * Kt0 * b.built.grid.h;
    }
    std::printf("  recorded K = %.3e (floor %.0e)\n", K_recorded, K_floor);
    return ok;
}

bool criterion_6() {
    bool ok = true;
    for (int level = 0; level <= 1; ++level)
        for (const auto& si : corpus_level(level)) {
            const EstimateReport r = volume_bound_report(si.sol.u, si.built.theta, si.spec.ball_R);
            if (level == 0)
                std::printf("  %-10s lhs=%.4f rhs=%.2f %s\n", si.spec.name.c_str(), r.lhs, r.rhs,
                            r.pass ? "ok" : "VIOLATION");
            ok = ok && r.pass;
        }
    const VolumeBoundConstants c = volume_bound_constants(1.0, 0.0, 0.0);
    ok = ok && std::abs(c.C1 - 2.6131259297527531) <= 1e-10;
    return ok;
}

bool criterion_7() {
    CutoffSet cs;
    try {
        cs = build_cutoffs();
    } catch (const std::exception& e) {
        std::printf("  construction failed structurally: %s\n", e.what());
        return false;
    }
    std::printf("  supports/plateaus exact: %s; min partition sum %.6f (>= 1 required)\n",
                cs.structural_ok ? "yes" : "NO", cs.min_partition_sum);
    bool ok = cs.structural_ok && cs.min_partition_sum >= 1.0 - 1e-12;
    for (const auto& cert : cs.certifications) {
        std::printf("  %-5s max|d1|=%.4f (bound %.4f) %s   max|d2|=%.4f (bound %.4f) %s\n",
                    cert.name.c_str(), cert.max_abs_d1, cert.bound_d1, cert.d1_ok ? "ok" : "VIOLATION",
                    cert.max_abs_d2, cert.bound_d2, cert.d2_ok ? "ok" : "VIOLATION");
        ok = ok && cert.d1_ok && cert.d2_ok;
    }
    // the quoted bounds are unattainable on the stated ramp widths (the mean
    // slope already saturates them); reported faithfully above
    return ok;
}

bool criterion_8() {
    SplitMix64 rng(314159u);
    bool ok = true;
    for (int k = 0; k < 100; ++k) {
        const double gamma = rng.uniform(0.05 + 1e-6, 0.95 - 1e-6);
        const double Gamma = rng.uniform(1.0, 10.0);
        const ConstantLedger led = choose_constants(gamma, Gamma);
        for (const auto& chk : validate_ledger(led)) {
            if (!chk.ok) {
                std::printf("  ledger check %s failed at gamma=%.4f Gamma=%.4f\n", chk.name.c_str(),
                            gamma, Gamma);
                ok = false;
            }
        }
        // rejection: alpha above the threshold leaves an empty beta window
        const double thr = alpha_threshold(gamma, Gamma);
        const double bad = thr * 1.0001;
        const double lo = 292.0 * std::pow(bad, 4.0 / 3.0) / gamma;
        const double hi = bad / (16.0 * Gamma);
        if (lo < hi * (1.0 - 1e-9)) {
            std::printf("  rejection test failed at gamma=%.4f Gamma=%.4f\n", gamma, Gamma);
            ok = false;
        }
    }
    std::printf("  100 seeded (gamma, Gamma) pairs validated with the rejection control\n");
    return ok;
}

bool criterion_9() {
    bool ok = true;
    for (int idx = 0; idx < 8; ++idx) {
        const SolvedInstance& a = corpus_level(0)[idx];
        const SolvedInstance& b = corpus_level(1)[idx];

        // max of P strictly inside the ball at both levels
        for (const SolvedInstance* si : {&a, &b}) {
            const Grid& g = si->built.grid;
            const Region ball = ball_region(g, g.center(), 2.0 * si->spec.test_r);
            const ScalarField& ux = si->sol.u.d(1, 0);
            const ScalarField& uy = si->sol.u.d(0, 1);
            double c1norm = 0.0;
            for (int k : ball.nodes)
                c1norm = std::max(c1norm, std::abs(si->sol.u.u()[k]) + std::hypot(ux[k], uy[k]));
            const ConstantLedger ledger = choose_constants(0.5, 1.0 + c1norm);
            const TestFunctionResult tr =
                test_function_P(si->sol.u, si->built.theta, ledger, g.center(), si->spec.test_r);
            if (!std::isfinite(tr.max_value) || tr.max_on_rim) {
                std::printf("  %-10s n=%d: max P on rim or non-finite\n", si->spec.name.c_str(),
                            g.n);
                ok = false;
            }
        }

        const DoublingResult d0 =
            doubling_report(a.sol.u, a.built.theta, a.built.grid.center(), a.spec.doubling_r);
        const DoublingResult d1 =
            doubling_report(b.sol.u, b.built.theta, b.built.grid.center(), b.spec.doubling_r);
        const double change = std::abs(d1.ratio - d0.ratio) / std::max(d0.ratio, 1e-12);
        std::printf("  %-10s doubling ratio %.6f -> %.6f (change %.2f%%)\n", a.spec.name.c_str(),
                    d0.ratio, d1.ratio, 100.0 * change);
        ok = ok && change <= 0.10;
    }
    return ok;
}

bool criterion_10() {
    auto defect_at = [](int n, auto f) {
        const Grid g = make_grid({-1, -1}, {2, 2}, n);
        const PotentialField u(sample(g, f));
        return sigma2_divergence_check(u).lhs;
    };
    // quadratic exactness: rounding amplification in the composed differences
    // is eps/h^2, so the 1e-12 budget pins the coarser grid
    const double dq =
        defect_at(33, [](double x, double y) { return 0.8 * x * x / 2 + 1.7 * y * y / 2 + 0.3 * x * y; });
    auto smooth = [](double x, double y) { return std::sin(x) * std::sin(y) + 0.1 * x * x * y; };
    const double d1 = defect_at(65, smooth);
    const double d2 = defect_at(129, smooth);
    const double ratio = d1 / d2;
    std::printf("  quadratic defect %.3e; smooth defect ratio h->h/2: %.3f\n", dq, ratio);
    return dq <= 1e-12 && ratio >= 3.5 && ratio <= 4.5;
}

bool criterion_11() {
    bool ok = true;
    // field-level: the Jacobi defect field is invariant under (u, Theta) -> (-u, -Theta)
    for (const auto& si : corpus_level(0)) {
        cli::InstanceSpec neg = si.spec;
        if (neg.phase == "constant")
            neg.value = -neg.value;
        else
            neg.amplitude = -neg.amplitude;
        neg.p1 = -neg.p1;
        const cli::BuiltInstance nb = cli::build_instance(neg, 0);
        ScalarField un = si.sol.u.u();
        for (auto& v : un.values) v = -v;
        const PotentialField u_neg(std::move(un));

        const ScalarField da = jacobi_defect_field(si.sol.u, si.built.theta);
        const ScalarField db = jacobi_defect_field(u_neg, nb.theta);
        double scale = 1.0, worst = 0.0;
        for (int k = 0; k < da.grid.size(); ++k) scale = std::max(scale, std::abs(da[k]));
        for (int k = 0; k < da.grid.size(); ++k) worst = std::max(worst, std::abs(da[k] - db[k]));
        std::printf("  %-10s jacobi defect reflection mismatch %.3e (scale %.2e)\n",
                    si.spec.name.c_str(), worst, scale);
        ok = ok && worst <= 1e-12 * scale;

        // residual oddness on the same data
        const ScalarField ra = residual(si.sol.u, si.built.theta);
        const ScalarField rb = residual(u_neg, nb.theta);
        double worst_r = 0.0;
        for (int k = 0; k < ra.grid.size(); ++k) worst_r = std::max(worst_r, std::abs(ra[k] + rb[k]));
        ok = ok && worst_r <= 1e-12;
    }
    // frame-level: certificates pass on reflected samples iff on originals
    for (int k = 0; k < 20000; ++k) {
        const FrameSample s = sample_case1(1234u, static_cast<std::uint64_t>(k));
        const CertificateResult orig = case1_certificate(s);
        const CertificateResult back = case1_certificate(reflect_sample(reflect_sample(s)));
        if (orig.pass != back.pass || std::abs(orig.defect - back.defect) > 1e-12 * orig.scale) {
            ok = false;
            break;
        }
    }
    return ok;
}

bool criterion_12() {
    const char* config_text = R"(
[run]
seed = 20250808
newton_tol = 1e-10
identity_samples = 10000
checks = jacobi,volume,doubling,gradient,sigma2,testP,interpolation,tanform,identities

[instance]
name = det_cubic
phase = cubic
amplitude = 0.08
c0 = 0.0
cx = 1.0
cy = 0.5
potential = harmonic_quadratic
p1 = 0.4
n = 33
domain_half = 2.0
refinements = 2
)";
    cli::RunConfig cfg = cli::parse_config_text(config_text);
    cli::validate_config(cfg);
    namespace fs = std::filesystem;
    const std::string dir_a = (fs::temp_directory_path() / "lmc_acc_det_a").string();
    const std::string dir_b = (fs::temp_directory_path() / "lmc_acc_det_b").string();
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    const cli::RunReport r1 = cli::execute(cfg);
    cli::emit_reports(r1, cfg, dir_a);
    const cli::RunReport r2 = cli::execute(cfg);
    cli::emit_reports(r2, cfg, dir_b);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const bool same_json = slurp(dir_a + "/report.json") == slurp(dir_b + "/report.json");
    const bool same_table = slurp(dir_a + "/checks.txt") == slurp(dir_b + "/checks.txt");
    std::printf("  report.json byte-identical: %s; checks.txt byte-identical: %s\n",
                same_json ? "yes" : "NO", same_table ? "yes" : "NO");
    return same_json && same_table && r1.overall_pass;
}

struct Criterion {
    int id;
    const char* title;
    bool (*fn)();
};

const Criterion kCriteria[] = {
    {1, "algebraic identity suite (1e5 samples, 1e-11 relative, <= 30 s)", criterion_1},
    {2, "discriminant certificate 23 - 8 sin - 15 sin^2 >= 0, sharp at pi/2", criterion_2},
    {3, "appendix arctan inequalities with C(p) = 2^{p/2} pi / p", criterion_3},
    {4, "manufactured-solution convergence, orders in [1.7, 2.3]", criterion_4},
    {5, "Jacobi inequality on the corpus: min defect >= -K h, stable K", criterion_5},
    {6, "volume bound with the explicit constants on every instance", criterion_6},
    {7, "cutoff certification: supports/plateaus and derivative bounds", criterion_7},
    {8, "constant-ledger feasibility on 100 seeded pairs + rejection", criterion_8},
    {9, "test-function max interior + doubling ratio stable under refinement", criterion_9},
    {10, "sigma_2 divergence identity: refinement ratio in [3.5, 4.5]", criterion_10},
    {11, "sign-reflection symmetry of certificates and Jacobi defects", criterion_11},
    {12, "byte-identical reports for identical config and seed", criterion_12},
};

}  // namespace

int main(int argc, char** argv) {
    int selected = 0;  // 0 = all
    for (int a = 1; a < argc; ++a) {
        if (std::strcmp(argv[a], "--criterion") == 0 && a + 1 < argc) selected = std::atoi(argv[a + 1]);
    }
    bool all_ok = true;
    for (const Criterion& c : kCriteria) {
        if (selected != 0 && c.id != selected) continue;
        std::printf("criterion %2d: %s\n", c.id, c.title);
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            std::printf("  exception: %s\n", e.what());
        }
        std::printf("[%s] criterion %d\n", ok ? "PASS" : "FAIL", c.id);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
