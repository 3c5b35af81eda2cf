#include "lmc/estimates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lmc/geometry.hpp"
#include "lmc/parallel.hpp"

namespace lmc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ---------------------------------------------------------------------------
// Constant ledger

std::vector<LedgerCheck> validate_ledger(const ConstantLedger& c) {
    const double a = std::abs(c.alpha);
    const double a43 = std::pow(a, 4.0 / 3.0);
    const double g23 = std::pow(c.gamma, 2.0 / 3.0);
    const double bG43 = std::pow(c.beta * c.Gamma, 4.0 / 3.0);
    std::vector<LedgerCheck> v;
    auto add = [&](const std::string& name, double lhs, double rhs) {
        v.push_back({name, lhs, rhs, lhs < rhs});
    };
    add("range_alpha_pos", 0.0, a);
    add("range_alpha", a, 1.0);
    add("range_beta_pos", 0.0, c.beta);
    add("range_beta", c.beta, 1.0);
    add("range_gamma_pos", 0.0, c.gamma);
    add("range_gamma", c.gamma, 1.0);
    add("nu_gt_1", 1.0, c.nu);
    add("ogalbet_alpha", a43 / c.beta, c.gamma / 292.0);
    add("ogalbet_Gamma", 16.0 * c.Gamma, a / c.beta);
    add("albet_alpha_sq", c.alpha * c.alpha, c.beta / 292.0 * g23);
    add("albet_betaGamma_sq", c.beta * c.Gamma * c.Gamma, g23 / 292.0);
    add("albet2_betaGamma", c.beta * c.Gamma, a / 16.0);
    add("albet3_alpha", a43, c.beta / 292.0 * g23);
    add("albet3_betaGamma", bG43, c.beta / 292.0 * g23);
    add("albet4_alpha", a43, c.beta / 292.0 * c.gamma);
    add("albet4_betaGamma", bG43, c.beta / 292.0 * c.gamma);
    add("chain_16pow", bG43, a43 / std::pow(16.0, 4.0 / 3.0));
    add("sandwich_lo", a43, c.beta);
    add("sandwich_hi", c.beta, a);
    return v;
}

bool ledger_ok(const ConstantLedger& c) {
    for (const auto& chk : validate_ledger(c))
        if (!chk.ok) return false;
    return true;
}

double alpha_threshold(double gamma, double Gamma) {
    const double t = gamma / (4672.0 * Gamma);
    return t * t * t;
}

ConstantLedger choose_constants(double gamma, double Gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("choose_constants: gamma must be in (0,1)");
    if (!(Gamma >= 1.0)) throw std::invalid_argument("choose_constants: Gamma must be >= 1");
    ConstantLedger c;
    c.gamma = gamma;
    c.Gamma = Gamma;
    c.alpha = 0.5 * alpha_threshold(gamma, Gamma);
    const double lo = 292.0 * std::pow(c.alpha, 4.0 / 3.0) / gamma;
    const double hi = c.alpha / (16.0 * Gamma);
    if (!(lo < hi)) throw std::logic_error("choose_constants: empty beta window");
    c.beta = std::sqrt(lo) * std::sqrt(hi);
    if (!ledger_ok(c)) throw std::logic_error("choose_constants: ledger validation failed");
    return c;
}

// ---------------------------------------------------------------------------
// Jacobi inequality

JacobiConstant jacobi_constant(double theta_point, double norm_d1, double norm_d2) {
    if (!(std::abs(theta_point) < kPi))
        throw std::invalid_argument("jacobi_constant: |theta| must be < pi");
    JacobiConstant jc;
    if (std::abs(theta_point) < kPi / 2.0) {
        jc.epsilon = std::sin(std::abs(theta_point)) / 4.0;
        jc.C = 5.0 * kPi * kPi / 8.0 + (5.0 * kPi + 4.0) / 2.0 * norm_d2;
    } else {
        jc.epsilon = 3.0 / 8.0;
        jc.C = 2.0 * norm_d1 * norm_d1 + 2.0 * norm_d2;
    }
    return jc;
}

ScalarField slope_field(const PotentialField& u) {
    const Grid& g = u.grid();
    ScalarField b(g);
    par::parallel_for(g.n, [&](std::int64_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = 0; i < g.n; ++i)
            b(i, j) = metric_data(hessian_spectrum(u.hessian_at(i, j))).b;
    });
    return b;
}

ScalarField jacobi_defect_field(const PotentialField& u, const PhaseField& theta) {
    const Grid& g = u.grid();
    const ScalarField b = slope_field(u);
    const ScalarField lb = laplace_beltrami(b, u, theta);
    const ScalarField gn = grad_norm_g(b, u);
    ScalarField defect(g);
    par::parallel_for(g.n, [&](std::int64_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = 0; i < g.n; ++i) {
            const JacobiConstant jc = jacobi_constant(theta.theta(i, j), theta.norm_d1, theta.norm_d2);
            defect(i, j) = lb(i, j) - jc.epsilon * gn(i, j) + jc.C;
        }
    });
    return defect;
}

EstimateReport jacobi_report(const PotentialField& u, const PhaseField& theta, const Region& region,
                             double solved_tol, double K) {
    const double rsup = residual_sup(u, theta);
    if (rsup > solved_tol)
        throw std::invalid_argument("jacobi_report: unsolved input (residual " + std::to_string(rsup) +
                                    " exceeds " + std::to_string(solved_tol) + ")");
    const Grid& g = u.grid();
    const Region reg = with_margin(g, region, 3);
    const ScalarField defect = jacobi_defect_field(u, theta);

    EstimateReport rep;
    rep.name = "jacobi";
    const int at = field_argmin(defect, reg);
    const int node = reg.nodes[static_cast<std::size_t>(at)];
    rep.worst_defect = defect[node];
    rep.loc_i = node % g.n;
    rep.loc_j = node / g.n;
    const JacobiConstant jc =
        jacobi_constant(theta.theta(rep.loc_i, rep.loc_j), theta.norm_d1, theta.norm_d2);
    rep.lhs = defect[node] - jc.C;  // Delta_g b - eps |grad b|^2 at the worst node
    rep.rhs = -jc.C;
    rep.tolerance = K * g.h;
    return finish_report(rep);
}

// ---------------------------------------------------------------------------
// Doubling test function

TestFunctionResult test_function_P(const PotentialField& u, const PhaseField& theta,
                                   const ConstantLedger& ledger, Vec2 center, double r) {
    (void)theta;
    if (!ledger_ok(ledger)) throw std::invalid_argument("test_function_P: invalid ledger");
    const Grid& g = u.grid();
    const double h_resc = g.h / r;
    const ScalarField b = slope_field(u);
    const double b_half_max = field_max(b, ball_region(g, center, 0.5 * r));
    const ScalarField& ux = u.d(1, 0);
    const ScalarField& uy = u.d(0, 1);

    TestFunctionResult out;
    out.P = ScalarField(g, std::numeric_limits<double>::lowest());
    std::vector<char> evaluated(static_cast<std::size_t>(g.size()), 0);
    const double inv_r2 = 1.0 / (r * r);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const Vec2 d = g.node(i, j) - center;
            const double rho = 1.0 - dot(d, d) * inv_r2;
            if (rho <= h_resc) continue;
            const double bbar = b(i, j) - b_half_max;
            const double du2 = (ux(i, j) * ux(i, j) + uy(i, j) * uy(i, j)) * inv_r2;
            const double pv = ledger.nu * std::log(rho) +
                              ledger.alpha * (d.x * ux(i, j) + d.y * uy(i, j) - u.u()(i, j)) * inv_r2 +
                              0.5 * ledger.beta * du2 +
                              std::log(std::max(bbar, 1.0 / ledger.gamma));
            out.P(i, j) = pv;
            evaluated[static_cast<std::size_t>(g.index(i, j))] = 1;
            if (out.argmax_i < 0 || pv > out.max_value) {
                out.max_value = pv;
                out.argmax_i = i;
                out.argmax_j = j;
            }
        }
    if (out.argmax_i < 0) throw std::invalid_argument("test_function_P: ball too small for the grid");
    auto on_rim = [&](int i, int j) {
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int ii = i + di[k], jj = j + dj[k];
            if (ii < 0 || jj < 0 || ii >= g.n || jj >= g.n) return true;
            if (!evaluated[static_cast<std::size_t>(g.index(ii, jj))]) return true;
        }
        return false;
    };
    out.max_on_rim = on_rim(out.argmax_i, out.argmax_j);
    return out;
}

DoublingResult doubling_report(const PotentialField& u, const PhaseField& theta, Vec2 p, double r) {
    (void)theta;
    const Grid& g = u.grid();
    const ScalarField b = slope_field(u);
    DoublingResult out;
    out.sup_r = field_max(b, ball_region(g, p, r));
    out.sup_half = field_max(b, ball_region(g, p, 0.5 * r));
    out.ratio = out.sup_r / std::max(out.sup_half, 1.0);
    out.report.name = "doubling";
    out.report.lhs = out.sup_r;
    out.report.rhs = std::max(out.sup_half, 1.0);
    out.report.worst_defect = 0.0;
    out.report.tolerance = 0.0;
    out.report.note = "ratio=" + std::to_string(out.ratio);
    out.report.pass = std::isfinite(out.ratio);
    return out;
}

// ---------------------------------------------------------------------------
// Gradient estimate

GradientEstimateResult gradient_estimate_report(const PotentialField& u, const PhaseField& theta,
                                                double R) {
    (void)theta;
    const Grid& g = u.grid();
    const int c = (g.n - 1) / 2;  // center node (n odd)
    const Vec2 du = u.grad_at(c, c);
    const Region ball = ball_region(g, g.center(), R);
    const double umax = field_max(u.u(), ball);
    const double umin = field_min(u.u(), ball);
    const double osc = umax - umin;

    GradientEstimateResult out;
    out.lhs = R * norm(du);
    out.rhs_basis = osc * (1.0 + osc);
    out.ratio = out.lhs / std::max(out.rhs_basis, 1e-300);
    if (out.lhs == 0.0) out.ratio = 0.0;
    out.report.name = "gradient_estimate";
    out.report.lhs = out.lhs;
    out.report.rhs = out.rhs_basis;
    out.report.worst_defect = 0.0;
    out.report.tolerance = 0.0;
    out.report.note = "ratio=" + std::to_string(out.ratio);
    out.report.pass = std::isfinite(out.ratio);
    return out;
}

// ---------------------------------------------------------------------------
// Cutoffs

namespace {

// quintic smoothstep on [0,1]
double smoothstep5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smoothstep5_d1(double t) {
    const double a = t * (1.0 - t);
    return 30.0 * a * a;
}
double smoothstep5_d2(double t) { return 60.0 * t * (1.0 - 2.0 * t) * (1.0 - t); }

}  // namespace

double Cutoff1D::value(double t) const {
    if (t <= supp_lo || t >= supp_hi) return 0.0;
    if (t >= plat_lo && t <= plat_hi) return 1.0;
    if (t < plat_lo) return smoothstep5((t - supp_lo) / (plat_lo - supp_lo));
    return smoothstep5((supp_hi - t) / (supp_hi - plat_hi));
}

double Cutoff1D::d1(double t) const {
    if (t <= supp_lo || t >= supp_hi) return 0.0;
    if (t >= plat_lo && t <= plat_hi) return 0.0;
    if (t < plat_lo) {
        const double w = plat_lo - supp_lo;
        return smoothstep5_d1((t - supp_lo) / w) / w;
    }
    const double w = supp_hi - plat_hi;
    return -smoothstep5_d1((supp_hi - t) / w) / w;
}

double Cutoff1D::d2(double t) const {
    if (t <= supp_lo || t >= supp_hi) return 0.0;
    if (t >= plat_lo && t <= plat_hi) return 0.0;
    if (t < plat_lo) {
        const double w = plat_lo - supp_lo;
        return smoothstep5_d2((t - supp_lo) / w) / (w * w);
    }
    const double w = supp_hi - plat_hi;
    return smoothstep5_d2((supp_hi - t) / w) / (w * w);
}

double RadialCutoff::value(double r) const {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    return 1.0 - smoothstep5(r - 1.0);
}

double RadialCutoff::d1(double r) const {
    if (r <= 1.0 || r >= 2.0) return 0.0;
    return -smoothstep5_d1(r - 1.0);
}

double RadialCutoff::d2(double r) const {
    if (r <= 1.0 || r >= 2.0) return 0.0;
    return -smoothstep5_d2(r - 1.0);
}

double RadialCutoff::grad_norm(double r) const { return std::abs(d1(r)); }

double RadialCutoff::hess_norm(double r) const {
    if (r <= 0.0) return 0.0;
    return std::max(std::abs(d2(r)), std::abs(d1(r)) / r);
}

CutoffSet build_cutoffs() {
    CutoffSet cs;
    const double p8 = kPi / 8.0;
    cs.rho[0] = {-9.0 * p8, -8.0 * p8, -6.0 * p8, -5.0 * p8};
    cs.rho[1] = {-7.0 * p8, -6.0 * p8, -2.0 * p8, -1.0 * p8};
    cs.rho[2] = {-3.0 * p8, -2.0 * p8, 2.0 * p8, 3.0 * p8};
    cs.rho[3] = {1.0 * p8, 2.0 * p8, 6.0 * p8, 7.0 * p8};
    cs.rho[4] = {5.0 * p8, 6.0 * p8, 8.0 * p8, 9.0 * p8};

    const int nsample = 10000;
    bool structural = true;
    cs.bounds_ok = true;

    for (int k = 0; k < 5; ++k) {
        const Cutoff1D& rho = cs.rho[static_cast<std::size_t>(k)];
        CutoffCertification cert;
        cert.name = "rho" + std::to_string(k + 1);
        cert.bound_d1 = 8.0 / kPi;
        cert.bound_d2 = 64.0 / (kPi * kPi);
        const double lo = rho.supp_lo - 0.1, hi = rho.supp_hi + 0.1;
        for (int s = 0; s <= nsample; ++s) {
            const double t = lo + (hi - lo) * s / nsample;
            const double v = rho.value(t);
            if (v < 0.0 || v > 1.0) structural = false;
            if ((t < rho.supp_lo || t > rho.supp_hi) && v != 0.0) structural = false;
            if (t > rho.plat_lo && t < rho.plat_hi && v != 1.0) structural = false;
            cert.max_abs_d1 = std::max(cert.max_abs_d1, std::abs(rho.d1(t)));
            cert.max_abs_d2 = std::max(cert.max_abs_d2, std::abs(rho.d2(t)));
        }
        cert.d1_ok = cert.max_abs_d1 <= cert.bound_d1 + 1e-9;
        cert.d2_ok = cert.max_abs_d2 <= cert.bound_d2 + 1e-9;
        cs.bounds_ok = cs.bounds_ok && cert.d1_ok && cert.d2_ok;
        cs.certifications.push_back(cert);
    }

    {
        CutoffCertification cert;
        cert.name = "chi";
        cert.bound_d1 = 1.0;
        cert.bound_d2 = 2.0;
        for (int s = 0; s <= nsample; ++s) {
            const double r = 2.2 * s / nsample;
            const double v = cs.chi.value(r);
            if (v < 0.0 || v > 1.0) structural = false;
            if (r < 1.0 && v != 1.0) structural = false;
            if (r > 2.0 && v != 0.0) structural = false;
            cert.max_abs_d1 = std::max(cert.max_abs_d1, cs.chi.grad_norm(r));
            cert.max_abs_d2 = std::max(cert.max_abs_d2, cs.chi.hess_norm(r));
        }
        // strict bounds quoted for chi
        cert.d1_ok = cert.max_abs_d1 < cert.bound_d1;
        cert.d2_ok = cert.max_abs_d2 < cert.bound_d2;
        cs.bounds_ok = cs.bounds_ok && cert.d1_ok && cert.d2_ok;
        cs.certifications.push_back(cert);
    }

    cs.min_partition_sum = std::numeric_limits<double>::infinity();
    for (int s = 1; s < nsample; ++s) {
        const double t = -kPi + 2.0 * kPi * s / nsample;
        double sum = 0.0;
        for (const auto& rho : cs.rho) sum += rho.value(t);
        cs.min_partition_sum = std::min(cs.min_partition_sum, sum);
    }
    if (cs.min_partition_sum < 1.0 - 1e-12) structural = false;

    cs.structural_ok = structural;
    if (!structural)
        throw std::runtime_error("build_cutoffs: structural violation (support/plateau/range/partition)");
    return cs;
}

bool sec_csc_bounds_on_supports(const CutoffSet& cs) {
    const double C1 = 2.0 / std::sqrt(2.0 - std::sqrt(2.0));
    const int nsample = 10000;
    for (int k = 0; k < 5; ++k) {
        const Cutoff1D& rho = cs.rho[static_cast<std::size_t>(k)];
        const bool sec_type = (k == 0 || k == 2 || k == 4);
        const double lo = std::max(rho.supp_lo, -kPi) + 1e-9;
        const double hi = std::min(rho.supp_hi, kPi) - 1e-9;
        for (int s = 1; s < nsample; ++s) {
            const double t = lo + (hi - lo) * s / nsample;
            const double v = sec_type ? std::abs(1.0 / std::cos(t)) : std::abs(1.0 / std::sin(t));
            if (v > C1 * (1.0 + 1e-12)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Volume bound

VolumeBoundConstants volume_bound_constants(double R, double norm_d1, double norm_d2) {
    VolumeBoundConstants c;
    c.C1 = 2.0 / std::sqrt(2.0 - std::sqrt(2.0));
    c.C2 = 2.0 / (R * R) + 48.0 / (kPi * kPi) * norm_d1 * norm_d1 + 4.0 / kPi * norm_d2;
    c.C3 = 1.0 / R + 8.0 / kPi * norm_d1;
    return c;
}

EstimateReport volume_bound_report(const PotentialField& u, const PhaseField& theta, double R) {
    const Grid& g = u.grid();
    const Vec2 c = g.center();
    if (2.0 * R > 0.5 * g.extent.x)
        throw std::invalid_argument("volume_bound_report: grid does not contain B_2R");

    ScalarField V(g);
    par::parallel_for(g.n, [&](std::int64_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = 0; i < g.n; ++i)
            V(i, j) = metric_data(hessian_spectrum(u.hessian_at(i, j))).V;
    });
    const Region inner = ball_region(g, c, R);
    const double lhs = integrate(V, inner) / region_area(g, inner);

    const Region outer = ball_region(g, c, 2.0 * R);
    const ScalarField& ux = u.d(1, 0);
    const ScalarField& uy = u.d(0, 1);
    const double du_sup = par::max_over(
        static_cast<std::int64_t>(outer.nodes.size()),
        [&](std::int64_t k) {
            const int node = outer.nodes[static_cast<std::size_t>(k)];
            return std::hypot(ux[node], uy[node]);
        },
        0.0);
    const VolumeBoundConstants vb = volume_bound_constants(R, theta.norm_d1, theta.norm_d2);
    const double rhs = 12.0 * vb.C1 * (1.0 + vb.C2 * du_sup * du_sup + vb.C3 * du_sup);

    EstimateReport rep;
    rep.name = "volume_bound";
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.worst_defect = rhs * 1.01 - lhs;  // 1% quadrature margin
    rep.tolerance = 0.0;
    rep.note = "du_sup=" + std::to_string(du_sup);
    return finish_report(rep);
}

// ---------------------------------------------------------------------------
// sigma_2 divergence identity

namespace {

// defect field |2 sigma_2 - div(L_{sigma_2} Du)| with its sup location
struct Sigma2Defect {
    double sup = 0.0;
    int worst_node = 0;
};

Sigma2Defect sigma2_defect_over(const PotentialField& u, const Region& reg) {
    const Grid& g = u.grid();
    const ScalarField& u1 = u.d(1, 0);
    const ScalarField& u2 = u.d(0, 1);

    ScalarField p(g), q(g), s(g);
    par::parallel_for(g.size(), [&](std::int64_t k) {
        const int kk = static_cast<int>(k);
        p[kk] = u1[kk] * u2[kk];
        q[kk] = u2[kk] * u2[kk];
        s[kk] = u1[kk] * u1[kk];
    });
    // L_{sigma_2} Du = (d2(u2 u1) - d1(u2^2), d1(u1 u2) - d2(u1^2))
    ScalarField w1 = diff(p, 0, 1);
    const ScalarField dq = diff(q, 1, 0);
    ScalarField w2 = diff(p, 1, 0);
    const ScalarField ds = diff(s, 0, 1);
    par::parallel_for(g.size(), [&](std::int64_t k) {
        const int kk = static_cast<int>(k);
        w1[kk] -= dq[kk];
        w2[kk] -= ds[kk];
    });
    const ScalarField d1w1 = diff(w1, 1, 0);
    const ScalarField d2w2 = diff(w2, 0, 1);

    const ScalarField& uxx = u.d(2, 0);
    const ScalarField& uxy = u.d(1, 1);
    const ScalarField& uyy = u.d(0, 2);

    Sigma2Defect out;
    out.worst_node = reg.nodes.front();
    for (int k : reg.nodes) {
        const double sigma2 = uxx[k] * uyy[k] - uxy[k] * uxy[k];
        const double dv = d1w1[k] + d2w2[k];
        const double d = std::abs(2.0 * sigma2 - dv);
        if (d > out.sup) {
            out.sup = d;
            out.worst_node = k;
        }
    }
    return out;
}

}  // namespace

EstimateReport sigma2_divergence_check(const PotentialField& u) {
    const Grid& g = u.grid();
    const Sigma2Defect d = sigma2_defect_over(u, interior_region(g, 3));
    EstimateReport rep;
    rep.name = "sigma2_divergence";
    rep.lhs = d.sup;
    rep.rhs = 0.0;
    rep.worst_defect = -d.sup;
    rep.loc_i = d.worst_node % g.n;
    rep.loc_j = d.worst_node / g.n;
    rep.tolerance = d.sup;  // informational verdict; binding thresholds live with the callers
    rep.pass = true;
    return rep;
}

double sigma2_divergence_sup(const PotentialField& u, const Region& region) {
    return sigma2_defect_over(u, region).sup;
}

}  // namespace lmc
