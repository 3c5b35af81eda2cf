#pragma once

// Admissible Lagrangian phase fields: -pi < Theta < pi everywhere, with a
// discrete witness that D(Theta) vanishes on the zero set. Phases carry
// analytic derivative samples; only the potential u is ever numerically
// differentiated.

#include <string>

#include "lmc/analytic.hpp"
#include "lmc/estimates_report.hpp"
#include "lmc/grid.hpp"

namespace lmc {

struct PhaseField {
    ScalarField theta;
    ScalarField dtheta_x, dtheta_y;     // analytic gradient samples
    ScalarField d2_xx, d2_xy, d2_yy;    // analytic Hessian samples
    double norm_d1 = 0.0;               // sup |D Theta| over nodes
    double norm_d2 = 0.0;               // sup spectral norm of D^2 Theta over nodes

    const Grid& grid() const { return theta.grid; }
};

// Discrete zero-set gradient witness tolerance at spacing h.
double tol_zero(double h, double norm_d2);

// Builds a PhaseField from analytic data; validates the range -pi < Theta < pi
// and the zero-set witness (|DTheta| <= tol_zero where |Theta| <= h^2).
PhaseField make_phase(const Grid& g, const Analytic2& f);

// Theta = amplitude * s^3; D(Theta) = 3*amplitude*s^2*Ds vanishes exactly on
// {s = 0} = {Theta = 0}.
PhaseField build_phase_cubic(const Grid& g, const Analytic2& s, double amplitude);

enum class PhaseKind { Constant, SupercriticalConstant, SignChangingCubic };

// Test-corpus generator spanning the case split of the Jacobi inequality.
// Constant kinds use `value`; the cubic kind uses amplitude * (c0+cx*x+cy*y)^3.
struct PhaseSpec {
    PhaseKind kind = PhaseKind::Constant;
    double value = 0.0;      // constant kinds
    double amplitude = 0.0;  // cubic kind
    double c0 = 0.0, cx = 1.0, cy = 0.0;
};

PhaseField build_phase_signed(const Grid& g, const PhaseSpec& spec);

// Pointwise interpolation check |Df|^2 <= 2 f ||D^2 f||_inf over region nodes
// (f >= 0 required on the region; derivatives and the norm are grid-differenced
// over the region). worst_defect = min over nodes of rhs - lhs.
EstimateReport check_interpolation(const ScalarField& f, const Region& region);

// Boundary-weighted variant |Df(x)|^2 <= f(x)^2/(1-|x/R|^2) + 2||D^2 f|| |f(x)|
// on the ball B_R(center); optional second form of the external lemma.
EstimateReport check_interpolation_weighted(const ScalarField& f, Vec2 center, double R);

}  // namespace lmc
