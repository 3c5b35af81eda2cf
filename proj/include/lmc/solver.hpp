#pragma once

// The Lagrangian mean curvature operator F(D^2 u) = arctan(l1) + arctan(l2),
// its residuals and linearization, and a damped-Newton Dirichlet solver with
// pseudo-time flow fallback on the nodal system.

#include <memory>
#include <stdexcept>
#include <vector>

#include "lmc/analytic.hpp"
#include "lmc/geometry.hpp"
#include "lmc/grid.hpp"
#include "lmc/phase.hpp"

namespace lmc {

// Scalar potential with lazily recomputed derivative caches. Boundary nodes
// always carry the prescribed Dirichlet data exactly.
class PotentialField {
public:
    PotentialField() = default;
    explicit PotentialField(ScalarField u);

    const ScalarField& u() const { return u_; }
    const Grid& grid() const { return u_.grid; }

    // Derivative field of order (dx, dy), 1 <= dx+dy <= 3, cached.
    const ScalarField& d(int dx, int dy) const;

    Sym2 hessian_at(int i, int j) const;
    Vec2 grad_at(int i, int j) const;
    ThirdDerivs third_at(int i, int j) const;

    void update(ScalarField u);  // replaces values, drops caches

private:
    ScalarField u_;
    // cache slots: ux, uy, uxx, uxy, uyy, uxxx, uxxy, uxyy, uyyy
    mutable std::vector<std::unique_ptr<ScalarField>> cache_;
    std::unique_ptr<ScalarField>& slot(int dx, int dy) const;
};

struct SolveConfig {
    double newton_tol = 1e-10;  // residual sup-norm target (0 allowed: never met)
    int max_newton = 50;
    double damping = 0.5;       // backtracking factor in (0,1)
    double flow_dt = 0.0;       // 0 = default 0.2*h^2
    int flow_steps_max = 20000;
    double krylov_tol = 1e-10;  // relative residual of the inner linear solves
    int krylov_max_iter = 20000;
};

void validate(const SolveConfig& cfg);

enum class SolvePath { NewtonOnly, FlowThenNewton };

struct SolveResult {
    PotentialField u;
    double residual_sup = 0.0;
    int iterations = 0;  // Newton steps taken
    SolvePath path = SolvePath::NewtonOnly;
    std::vector<double> history;  // residual sup-norm after each accepted step
};

class SolveFailure : public std::runtime_error {
public:
    SolveFailure(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

// arctan(l1) + arctan(l2) of the (symmetrized) Hessian; range (-pi, pi).
double operator_F(const Sym2& H);

// F(D^2u(x)) - Theta(x) at interior nodes (boundary entries set to 0).
ScalarField residual(const PotentialField& u, const PhaseField& theta);
double residual_sup(const PotentialField& u, const PhaseField& theta);

// cos(Theta)*sigma1 + sin(Theta)*(sigma2 - 1) per node; vanishes exactly where
// the residual vanishes, including at Theta = +-pi/2 where tan degenerates.
ScalarField tan_form_residual(const PotentialField& u, const PhaseField& theta);

// dF at H: the coefficients g^{ab} = (I + H^2)^{-1}.
Sym2 linearized_coeffs(const Sym2& H);

// Damped Newton on the interior nodal system, BiCGSTAB with diagonal
// preconditioning for the 9-point linear solves, pseudo-time flow fallback
// after 3 consecutive stalled steps, Poisson initial guess from
// Delta u = 2 tan(Theta/2). Throws SolveFailure when the caps are exhausted.
SolveResult solve_dirichlet(const PhaseField& theta, const ScalarField& boundary, const Grid& g,
                            const SolveConfig& cfg);

struct ManufacturedProblem {
    PhaseField theta;       // Theta* = F(D^2 u*) with analytic-quality derivatives
    ScalarField boundary;   // trace of u*
    ScalarField u_exact;    // u* sampled (reference for convergence studies)
};

ManufacturedProblem manufactured_problem(const Grid& g, const AnalyticPotential& u_star);

}  // namespace lmc
