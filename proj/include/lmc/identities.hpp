#pragma once

// Grid-free verification of the frame-level algebra behind the degenerate
// Jacobi inequality: the three-term Laplace-Beltrami expansion of the slope,
// the assembled Case-1 display, the discriminant certificate, the reflection
// symmetry, and the appendix arctan inequalities.

#include <cstdint>

#include "lmc/grid.hpp"

namespace lmc {

// One point's worth of diagonal-frame data: Hessian eigenvalues, second
// fundamental form components, phase value and first/second phase derivatives.
struct FrameSample {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double h111 = 0.0, h112 = 0.0, h122 = 0.0, h222 = 0.0;
    double theta = 0.0;          // in (-pi, pi)
    Vec2 dtheta{};               // (Theta_x1, Theta_x2)
    Vec2 d2theta_diag{};         // (Theta_x1x1, Theta_x2x2)
};

// Derives (h111, h222) from h_{11i} + h_{22i} = sqrt(g^{ii}) Theta_{x_i}.
FrameSample impose_dpsi(FrameSample s);

// Component i of h_{11i} + h_{22i} - sqrt(g^{ii}) Theta_{x_i}.
Vec2 dpsi_residual(const FrameSample& s);

// Sign reflection (lambda1, lambda2) -> (-lambda2, -lambda1) with the phase
// negated and the frame components relabeled accordingly.
FrameSample reflect_sample(const FrameSample& s);

// Delta_g b = sum (1 + l_b l_c) h_abc^2 + sum g^ii l_i Theta_ii
//           - sum g^ii l_i Theta_i d_i b, with d_i b expanded in-frame.
double lemma31_direct(const FrameSample& s);

// Frame expansion of |grad_g b|^2.
double gradnorm_direct(const FrameSample& s);

// The assembled Case-1 right-hand side for Delta_g b - eps |grad_g b|^2.
double case1_assembled(const FrameSample& s, double eps);

// |case1_assembled - (lemma31_direct - eps*gradnorm_direct)| divided by the
// summed magnitude of the participating terms (cancellation-aware).
double identity_rel_defect(const FrameSample& s, double eps);

struct DiscriminantResult {
    double quartic = 0.0;  // 23 - 8 sin(theta) - 15 sin^2(theta)
    bool ok = false;       // quartic >= 0 and the cot-form inequality holds
};
DiscriminantResult discriminant_check(double theta);

// arctan(x) >= (pi/4) x on (0, 1], plus the sign change of f' at
// x* = sqrt(4/pi - 1).
bool appendix_lambda2_check(double x);

// C(p) = 2^{p/2} pi / p makes C y^p/(1+y^2)^{p/2} >= arctan(y) on [0, 1];
// verifies the two sufficiency conditions on C and the strict decrease of
// g(y) = pC / (y^{1-p} (1+y^2)^{p/2}) on a dense scan.
bool appendix_lambda1_check(double y, double p);

struct ChainReport {
    bool arctan_link = false;   // arctan(1/l1) < C/(1+l1^2)^{p/2}
    bool pairing_link = false;  // <= C/((1+l1^2)^{p/4}(1+l2^2)^{p/4})
    bool power_link = false;    // <= C/V^{p/8}
    bool log_link = false;      // <= C/b (requires log V <= V^{p/8})
    bool bbar_link = false;     // C/b <= C/bbar with bbar = b here
    bool log_power_applicable = false;  // whether log V <= V^{p/8} held
    bool conjunction = false;
    double V = 0.0, b = 0.0, C = 0.0;
};
// Link-by-link numeric check of the appendix closing chain; lambda1 > 1 required.
ChainReport chain_to_b_check(double lambda1, double lambda2, double p);

enum class MvtProfile { ArctanMinusLine, PowerMinusArctan, Zero };
// Dense-scan monotonicity/sign verification of the two appendix profiles.
bool mvt_lemma_check(MvtProfile profile, double lo, double hi, double p = 1.0);

struct CertificateResult {
    bool pass = false;
    double defect = 0.0;  // lhs - rhs (>= -tol means pass)
    double scale = 1.0;
};

// Case-1 pointwise lower bound after Young's inequality, at eps = sin(theta)/4:
// lemma31 - eps*gradnorm >= -|DTheta|^2 (3/2 + csc theta) + g11 l1 T11 + g22 l2 T22.
// Samples with theta below 1e-6 route to the Case-4 certificate (DTheta = 0).
CertificateResult case1_certificate(const FrameSample& s);

// Case-2 (theta in (pi/2, pi)): Delta_g b >= (3/8)|grad_g b|^2
//   - 2|DTheta|^2 - 2 max(|T11|, |T22|).
CertificateResult case2_certificate(const FrameSample& s);

// The displayed intermediate bound (1/2)|grad_g b|^2 <= h111^2 l1^2 + h112^2 l1^2
//   + h122^2 l2^2 + h222^2 l2^2, checked as written.
CertificateResult case2_half_gradnorm_display(const FrameSample& s);

// Deterministic samplers: sample k of a seeded suite depends only on (seed, k).
// Constrained: Dpsi imposed, theta free in (-pi, pi).
FrameSample sample_constrained(std::uint64_t seed, std::uint64_t index);
// Case-1 regime: lambda1 >= 0 >= lambda2, sigma1 >= 0, theta = F(lambda).
FrameSample sample_case1(std::uint64_t seed, std::uint64_t index);
// Case-2 regime: lambda1 >= lambda2 > 0 with theta = F(lambda) in (pi/2, pi).
FrameSample sample_case2(std::uint64_t seed, std::uint64_t index);

}  // namespace lmc
