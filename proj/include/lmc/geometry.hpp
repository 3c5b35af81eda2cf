#pragma once

// Per-point differential geometry of the gradient graph (x, Du(x)): closed-form
// 2x2 symmetric eigendecomposition, induced metric g = I + (D^2 u)^2, volume
// form V and slope b = log V, frame-rotated second fundamental form h_ijk, and
// the metric operators Laplace-Beltrami and |grad_g|^2.

#include <optional>

#include "lmc/grid.hpp"

namespace lmc {

class PotentialField;
struct PhaseField;

// Symmetric 2x2 matrix, stored as (a11, a12, a22).
struct Sym2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;
};

struct HessianSpectrum {
    double lambda1 = 0.0;  // larger eigenvalue
    double lambda2 = 0.0;
    double angle = 0.0;    // diagonalizing rotation, in (-pi/2, pi/2]; 0 on ties
};

struct MetricData {
    double g11 = 1.0;  // g^{11} = 1/(1+lambda1^2)
    double g22 = 1.0;
    double V = 1.0;    // sqrt((1+l1^2)(1+l2^2))
    double b = 0.0;    // log V, computed in log-sum form
    double sigma1 = 0.0;
    double sigma2 = 0.0;
};

// Second fundamental form components in the Hessian-diagonalizing frame.
struct FrameData {
    double h111 = 0.0;
    double h112 = 0.0;
    double h122 = 0.0;
    double h222 = 0.0;
};

struct GeometryFrame {
    HessianSpectrum spectrum;
    MetricData metric;
    std::optional<FrameData> frame;  // absent when third derivatives unavailable
};

// Third derivatives of a scalar, as the four independent components of the
// fully symmetric 3-tensor (u_xxx, u_xxy, u_xyy, u_yyy).
struct ThirdDerivs {
    double t111 = 0.0;
    double t112 = 0.0;
    double t122 = 0.0;
    double t222 = 0.0;
};

// Input is symmetrized: the off-diagonal used is (h12 + h21)/2 when a full
// matrix is supplied; here the Sym2 form is already symmetric.
HessianSpectrum hessian_spectrum(const Sym2& H);

MetricData metric_data(const HessianSpectrum& spec);

// h_ijk = sqrt(g^ii) sqrt(g^jj) sqrt(g^kk) u_ijk, with u_ijk supplied in the
// diagonalizing frame of D^2 u.
FrameData second_fundamental_form(const ThirdDerivs& frame_third, const HessianSpectrum& spec);

// Exact 3-index tensor transformation of third derivatives into the frame
// rotated by `angle` (the new axes are the columns of R(angle)).
ThirdDerivs rotate_third_derivatives(const ThirdDerivs& t, double angle);

// Spectrum + metric (+ frame from the potential's third derivatives, rotated
// by the spectrum angle; near-degenerate spectra reuse angle 0).
GeometryFrame geometry_frame_at(const PotentialField& u, int i, int j, bool with_frame);

// Exact closed-form inverse of I + H^2 (symmetric positive definite,
// eigenvalues 1/(1+lambda_i^2)).
Sym2 inverse_metric(const Sym2& H);

// Delta_g v = g^{ij} d_ij v - g^{jp} u_pq (d_q Theta) d_j v per node, with
// g^{ij} the full inverse of I + (D^2u)^2 in grid coordinates.
ScalarField laplace_beltrami(const ScalarField& v, const PotentialField& u, const PhaseField& theta);

// g^{ij} v_i v_j per node (nonnegative).
ScalarField grad_norm_g(const ScalarField& v, const PotentialField& u);

}  // namespace lmc
