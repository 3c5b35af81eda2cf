#pragma once

// Field-level estimate checkers on solved instances: the degenerate Jacobi
// inequality, the doubling test function P with its constant ledger, the
// scale-invariant gradient estimate, the volume bound with explicit constants,
// the sigma_2 divergence identity, and the phase-interval cutoff construction.

#include <array>
#include <string>
#include <vector>

#include "lmc/estimates_report.hpp"
#include "lmc/grid.hpp"
#include "lmc/phase.hpp"
#include "lmc/solver.hpp"

namespace lmc {

// ---------------------------------------------------------------------------
// Constant ledger

struct ConstantLedger {
    double nu = 6.0;      // fixed by the doubling argument
    double q = 2.0 / 3.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;   // in (0, 1)
    double Gamma = 1.0;   // 1 + C^1 norm of u
};

struct LedgerCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

// Every inequality the ledger must satisfy; all must hold for a valid ledger.
std::vector<LedgerCheck> validate_ledger(const ConstantLedger& c);
bool ledger_ok(const ConstantLedger& c);

// alpha/beta feasibility threshold for given (gamma, Gamma): alpha must lie
// strictly below (gamma / (4672 Gamma))^3 for the two base inequalities
// alpha^{4/3}/beta < gamma/292 and 16 Gamma < |alpha|/beta to admit a beta.
double alpha_threshold(double gamma, double Gamma);

// Picks alpha at half the threshold and beta as the geometric mean of its
// admissible window, then validates the full chain.
ConstantLedger choose_constants(double gamma, double Gamma);

// ---------------------------------------------------------------------------
// Jacobi inequality

struct JacobiConstant {
    double epsilon = 0.0;
    double C = 0.0;
};

// Branch constants of the degenerate Jacobi inequality: for |theta| < pi/2,
// eps = sin|theta|/4 and C = 5 pi^2/8 + ((5 pi + 4)/2) ||D2Theta||; otherwise
// eps = 3/8 and C = 2 ||DTheta||^2 + 2 ||D2Theta||.
JacobiConstant jacobi_constant(double theta_point, double norm_d1, double norm_d2);

// Slope field b = log V from the numerically differenced Hessian.
ScalarField slope_field(const PotentialField& u);

// Pointwise defect Delta_g b - eps(theta)|grad_g b|^2 + C; frame-free.
ScalarField jacobi_defect_field(const PotentialField& u, const PhaseField& theta);

// Min defect over the region; requires a solved instance
// (residual sup <= solved_tol). tolerance = K * h.
EstimateReport jacobi_report(const PotentialField& u, const PhaseField& theta, const Region& region,
                             double solved_tol, double K);

// ---------------------------------------------------------------------------
// Doubling test function

struct TestFunctionResult {
    ScalarField P;        // lowest() sentinel on non-evaluated nodes
    double max_value = 0.0;
    int argmax_i = -1;
    int argmax_j = -1;
    bool max_on_rim = false;  // max attained on the outermost evaluated layer
};

// P = nu ln(rho) + alpha (x.Du - u) + beta |Du|^2/2 + ln max(bbar, 1/gamma)
// on B_r(center) rescaled to the unit ball; evaluated where rho > h/r.
TestFunctionResult test_function_P(const PotentialField& u, const PhaseField& theta,
                                   const ConstantLedger& ledger, Vec2 center, double r);

struct DoublingResult {
    double sup_r = 0.0;
    double sup_half = 0.0;
    double ratio = 0.0;  // sup_r / max(sup_half, 1)
    EstimateReport report;
};

DoublingResult doubling_report(const PotentialField& u, const PhaseField& theta, Vec2 p, double r);

// ---------------------------------------------------------------------------
// Gradient estimate

struct GradientEstimateResult {
    double lhs = 0.0;        // R |Du(0)|
    double rhs_basis = 0.0;  // osc (1 + osc)
    double ratio = 0.0;
    EstimateReport report;
};

GradientEstimateResult gradient_estimate_report(const PotentialField& u, const PhaseField& theta,
                                                double R);

// ---------------------------------------------------------------------------
// Cutoffs

// 0 / quintic ramp / 1 / quintic ramp / 0 profile on an interval.
struct Cutoff1D {
    double supp_lo = 0.0, plat_lo = 0.0, plat_hi = 0.0, supp_hi = 0.0;
    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;
};

// chi(x) = psi(|x|): 1 on B_1, quintic descent on 1 <= |x| <= 2, 0 outside.
struct RadialCutoff {
    double value(double r) const;
    double d1(double r) const;       // psi'(r)
    double d2(double r) const;       // psi''(r)
    double grad_norm(double r) const;  // |D chi| at radius r
    double hess_norm(double r) const;  // spectral norm of D^2 chi at radius r
};

struct CutoffCertification {
    std::string name;
    double max_abs_d1 = 0.0, bound_d1 = 0.0;
    double max_abs_d2 = 0.0, bound_d2 = 0.0;
    bool d1_ok = false, d2_ok = false;
};

struct CutoffSet {
    std::array<Cutoff1D, 5> rho;
    RadialCutoff chi;
    std::vector<CutoffCertification> certifications;  // rho1..rho5 then chi
    double min_partition_sum = 0.0;  // min over the scan of sum_j rho_j on (-pi, pi)
    bool structural_ok = false;      // supports/plateaus/range/partition
    bool bounds_ok = false;          // all quoted derivative bounds hold
};

// Constructs the five phase-interval cutoffs and the radial cutoff, dense-
// samples every property, and throws only on structural violations; the
// derivative-bound outcomes are recorded in `certifications`.
CutoffSet build_cutoffs();

// |sec theta| <= C1 on the supports of rho1/rho3/rho5 and |csc theta| <= C1 on
// the supports of rho2/rho4 (dense sample, restricted to (-pi, pi)).
bool sec_csc_bounds_on_supports(const CutoffSet& cs);

// ---------------------------------------------------------------------------
// Volume bound

struct VolumeBoundConstants {
    double C1 = 0.0;  // 2 / sqrt(2 - sqrt 2)
    double C2 = 0.0;  // 2/R^2 + (48/pi^2)||DTheta||^2 + (4/pi)||D2Theta||
    double C3 = 0.0;  // 1/R + (8/pi)||DTheta||
};

VolumeBoundConstants volume_bound_constants(double R, double norm_d1, double norm_d2);

// (1/|B_R|) int_{B_R} V dx <= 12 C1 (1 + C2 ||Du||^2 + C3 ||Du||) with the
// norms over B_2R nodes; passes at a 1% quadrature margin. Balls centered at
// the grid center.
EstimateReport volume_bound_report(const PotentialField& u, const PhaseField& theta, double R);

// ---------------------------------------------------------------------------
// sigma_2 divergence identity

// sup over the 3h-margin interior of |2 sigma_2 - div(L_{sigma_2} Du)|, all
// derivatives grid-differenced.
EstimateReport sigma2_divergence_check(const PotentialField& u);

// Same defect, sup restricted to the given region (>= 3-cell margin required).
double sigma2_divergence_sup(const PotentialField& u, const Region& region);

}  // namespace lmc
