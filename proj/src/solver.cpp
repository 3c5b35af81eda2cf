#include "lmc/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "lmc/parallel.hpp"

namespace lmc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ---------------------------------------------------------------------------
// PotentialField

PotentialField::PotentialField(ScalarField u) : u_(std::move(u)), cache_(9) {}

std::unique_ptr<ScalarField>& PotentialField::slot(int dx, int dy) const {
    static const int lut[4][4] = {{-1, 1, 4, 8}, {0, 3, 7, -1}, {2, 6, -1, -1}, {5, -1, -1, -1}};
    // slots: (1,0) (0,1) (2,0) (1,1) (0,2) (3,0) (2,1) (1,2) (0,3)
    const int k = lut[dx][dy];
    if (k < 0) throw std::invalid_argument("PotentialField::d: order out of range");
    if (cache_.size() != 9) cache_.resize(9);
    return cache_[static_cast<std::size_t>(k)];
}

const ScalarField& PotentialField::d(int dx, int dy) const {
    const int total = dx + dy;
    if (total < 1 || total > 3) throw std::invalid_argument("PotentialField::d: |order| must be 1..3");
    auto& c = slot(dx, dy);
    if (!c) c = std::make_unique<ScalarField>(diff(u_, dx, dy));
    return *c;
}

Sym2 PotentialField::hessian_at(int i, int j) const {
    return {d(2, 0)(i, j), d(1, 1)(i, j), d(0, 2)(i, j)};
}

Vec2 PotentialField::grad_at(int i, int j) const { return {d(1, 0)(i, j), d(0, 1)(i, j)}; }

ThirdDerivs PotentialField::third_at(int i, int j) const {
    return {d(3, 0)(i, j), d(2, 1)(i, j), d(1, 2)(i, j), d(0, 3)(i, j)};
}

void PotentialField::update(ScalarField u) {
    u_ = std::move(u);
    cache_.clear();
    cache_.resize(9);
}

void validate(const SolveConfig& cfg) {
    if (cfg.newton_tol < 0.0) throw std::invalid_argument("SolveConfig: newton_tol must be >= 0");
    if (cfg.max_newton < 1) throw std::invalid_argument("SolveConfig: max_newton must be >= 1");
    if (!(cfg.damping > 0.0 && cfg.damping < 1.0))
        throw std::invalid_argument("SolveConfig: damping must be in (0,1)");
    if (cfg.flow_dt < 0.0) throw std::invalid_argument("SolveConfig: flow_dt must be >= 0");
    if (cfg.flow_steps_max < 1) throw std::invalid_argument("SolveConfig: flow_steps_max must be >= 1");
    if (!(cfg.krylov_tol > 0.0)) throw std::invalid_argument("SolveConfig: krylov_tol must be > 0");
}

// ---------------------------------------------------------------------------
// Operator, residuals, linearization

double operator_F(const Sym2& H) {
    const HessianSpectrum s = hessian_spectrum(H);
    return std::atan(s.lambda1) + std::atan(s.lambda2);
}

ScalarField residual(const PotentialField& u, const PhaseField& theta) {
    const Grid& g = u.grid();
    if (!g.same_layout(theta.grid()))
        throw std::invalid_argument("residual: fields on different grids");
    const ScalarField& uxx = u.d(2, 0);
    const ScalarField& uxy = u.d(1, 1);
    const ScalarField& uyy = u.d(0, 2);
    ScalarField r(g);
    par::parallel_for(g.n - 2, [&](std::int64_t jj) {
        const int j = static_cast<int>(jj) + 1;
        for (int i = 1; i < g.n - 1; ++i)
            r(i, j) = operator_F({uxx(i, j), uxy(i, j), uyy(i, j)}) - theta.theta(i, j);
    });
    return r;
}

double residual_sup(const PotentialField& u, const PhaseField& theta) {
    const ScalarField r = residual(u, theta);
    const Grid& g = u.grid();
    return par::max_over(
        g.size(), [&](std::int64_t k) { return std::abs(r[static_cast<int>(k)]); }, 0.0);
}

ScalarField tan_form_residual(const PotentialField& u, const PhaseField& theta) {
    const Grid& g = u.grid();
    if (!g.same_layout(theta.grid()))
        throw std::invalid_argument("tan_form_residual: fields on different grids");
    const ScalarField& uxx = u.d(2, 0);
    const ScalarField& uxy = u.d(1, 1);
    const ScalarField& uyy = u.d(0, 2);
    ScalarField r(g);
    par::parallel_for(g.n, [&](std::int64_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = 0; i < g.n; ++i) {
            const double s1 = uxx(i, j) + uyy(i, j);
            const double s2 = uxx(i, j) * uyy(i, j) - uxy(i, j) * uxy(i, j);
            const double th = theta.theta(i, j);
            r(i, j) = std::cos(th) * s1 + std::sin(th) * (s2 - 1.0);
        }
    });
    return r;
}

Sym2 linearized_coeffs(const Sym2& H) { return inverse_metric(H); }

// ---------------------------------------------------------------------------
// 9-point interior system and BiCGSTAB

namespace {

// Coefficients per interior node in the order C, E, W, N, S, NE, NW, SE, SW.
struct NinePoint {
    int n = 0;  // grid nodes per axis
    int m = 0;  // interior nodes per axis
    std::vector<std::array<double, 9>> c;

    int vec_index(int i, int j) const { return (j - 1) * m + (i - 1); }
    int size() const { return m * m; }
};

// coeffs(i, j) -> g^{ab} at the node; rows discretize g^{ab} d_ab.
template <typename CoeffFn>
NinePoint assemble(const Grid& g, CoeffFn&& coeffs) {
    NinePoint A;
    A.n = g.n;
    A.m = g.n - 2;
    A.c.resize(static_cast<std::size_t>(A.m) * A.m);
    const double ih2 = 1.0 / (g.h * g.h);
    par::parallel_for(A.m, [&](std::int64_t jj) {
        const int j = static_cast<int>(jj) + 1;
        for (int i = 1; i <= A.m; ++i) {
            const Sym2 G = coeffs(i, j);
            auto& row = A.c[static_cast<std::size_t>(A.vec_index(i, j))];
            row[0] = -2.0 * (G.a11 + G.a22) * ih2;
            row[1] = row[2] = G.a11 * ih2;
            row[3] = row[4] = G.a22 * ih2;
            row[5] = row[8] = 0.5 * G.a12 * ih2;
            row[6] = row[7] = -0.5 * G.a12 * ih2;
        }
    });
    return A;
}

void matvec(const NinePoint& A, const std::vector<double>& x, std::vector<double>& y) {
    const int m = A.m;
    par::parallel_for(m, [&](std::int64_t jj) {
        const int j = static_cast<int>(jj);  // 0-based interior row
        for (int i = 0; i < m; ++i) {
            const auto& r = A.c[static_cast<std::size_t>(j * m + i)];
            double acc = r[0] * x[static_cast<std::size_t>(j * m + i)];
            if (i + 1 < m) acc += r[1] * x[static_cast<std::size_t>(j * m + i + 1)];
            if (i - 1 >= 0) acc += r[2] * x[static_cast<std::size_t>(j * m + i - 1)];
            if (j + 1 < m) acc += r[3] * x[static_cast<std::size_t>((j + 1) * m + i)];
            if (j - 1 >= 0) acc += r[4] * x[static_cast<std::size_t>((j - 1) * m + i)];
            if (i + 1 < m && j + 1 < m) acc += r[5] * x[static_cast<std::size_t>((j + 1) * m + i + 1)];
            if (i - 1 >= 0 && j + 1 < m) acc += r[6] * x[static_cast<std::size_t>((j + 1) * m + i - 1)];
            if (i + 1 < m && j - 1 >= 0) acc += r[7] * x[static_cast<std::size_t>((j - 1) * m + i + 1)];
            if (i - 1 >= 0 && j - 1 >= 0) acc += r[8] * x[static_cast<std::size_t>((j - 1) * m + i - 1)];
            y[static_cast<std::size_t>(j * m + i)] = acc;
        }
    });
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return par::sum_over(static_cast<std::int64_t>(a.size()),
                         [&](std::int64_t i) { return a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)]; });
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct KrylovResult {
    bool converged = false;
    int iterations = 0;
    double relres = 0.0;
};

// Preconditioned BiCGSTAB with Jacobi preconditioning; does not assume symmetry.
KrylovResult bicgstab(const NinePoint& A, const std::vector<double>& b, std::vector<double>& x,
                      double tol, int max_iter) {
    const std::size_t N = b.size();
    x.assign(N, 0.0);
    std::vector<double> dinv(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double d = A.c[k][0];
        dinv[k] = d != 0.0 ? 1.0 / d : 1.0;
    }
    const double bnorm = norm2(b);
    KrylovResult res;
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    std::vector<double> r = b, rhat = b, p(N, 0.0), v(N, 0.0), y(N), z(N), s(N), t(N);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    double rnorm = bnorm;
    const double tiny = 1e-300;
    for (int it = 0; it < max_iter; ++it) {
        double rho_new = dot(rhat, r);
        if (std::abs(rho_new) < tiny) {
            rhat = r;
            rho_new = rnorm * rnorm;
            if (rho_new < tiny) break;
        }
        const double beta = (rho_new / rho) * (alpha / omega);
        par::parallel_for(static_cast<std::int64_t>(N), [&](std::int64_t k) {
            const auto i = static_cast<std::size_t>(k);
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        });
        par::parallel_for(static_cast<std::int64_t>(N), [&](std::int64_t k) {
            const auto i = static_cast<std::size_t>(k);
            y[i] = dinv[i] * p[i];
        });
        matvec(A, y, v);
        const double rv = dot(rhat, v);
        if (std::abs(rv) < tiny) break;
        alpha = rho_new / rv;
        par::parallel_for(static_cast<std::int64_t>(N), [&](std::int64_t k) {
            const auto i = static_cast<std::size_t>(k);
            s[i] = r[i] - alpha * v[i];
        });
        if (norm2(s) <= tol * bnorm) {
            par::parallel_for(static_cast<std::int64_t>(N), [&](std::int64_t k) {
                const auto i = static_cast<std::size_t>(k);
                x[i] += alpha * y[i];
            });
            res.converged = true;
            res.iterations = it + 1;
            res.relres = norm2(s) / bnorm;
            return res;
        }
        par::parallel_for(static_cast<std::int64_t>(N), [&](std::int64_t k) {
            const auto i = static_cast<std::size_t>(k);
            z[i] = dinv[i] * s[i];
        });
        matvec(A, z, t);
        const double tt = dot(t, t);
        if (tt < tiny) break;
        omega = dot(t, s) / tt;
        par::parallel_for(static_cast<std::int64_t>(N), [&](std::int64_t k) {
            const auto i = static_cast<std::size_t>(k);
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        });
        rnorm = norm2(r);
        res.iterations = it + 1;
        if (rnorm <= tol * bnorm) {
            res.converged = true;
            res.relres = rnorm / bnorm;
            return res;
        }
        rho = rho_new;
    }
    res.relres = rnorm / bnorm;
    return res;
}

// Solve the linear Dirichlet problem (coeffs g^{ab} fixed): g^{ab} d_ab u = f
// with boundary data taken from `bc` on the boundary ring.
template <typename CoeffFn>
ScalarField linear_dirichlet(const Grid& g, CoeffFn&& coeffs, const ScalarField& f,
                             const ScalarField& bc, double tol, int max_iter) {
    const NinePoint A = assemble(g, coeffs);
    const int m = A.m;
    std::vector<double> rhs(static_cast<std::size_t>(A.size()), 0.0);
    const double ih2 = 1.0 / (g.h * g.h);
    auto bval = [&](int i, int j) -> double {
        if (i == 0 || j == 0 || i == g.n - 1 || j == g.n - 1) return bc(i, j);
        return 0.0;
    };
    par::parallel_for(m, [&](std::int64_t jj) {
        const int j = static_cast<int>(jj) + 1;
        for (int i = 1; i <= m; ++i) {
            const Sym2 G = coeffs(i, j);
            double b = f(i, j);
            b -= G.a11 * ih2 * (bval(i + 1, j) + bval(i - 1, j));
            b -= G.a22 * ih2 * (bval(i, j + 1) + bval(i, j - 1));
            b -= 0.5 * G.a12 * ih2 * (bval(i + 1, j + 1) + bval(i - 1, j - 1));
            b += 0.5 * G.a12 * ih2 * (bval(i - 1, j + 1) + bval(i + 1, j - 1));
            rhs[static_cast<std::size_t>(A.vec_index(i, j))] = b;
        }
    });
    std::vector<double> x;
    bicgstab(A, rhs, x, tol, max_iter);
    ScalarField u(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            u(i, j) = (i == 0 || j == 0 || i == g.n - 1 || j == g.n - 1)
                          ? bc(i, j)
                          : x[static_cast<std::size_t>(A.vec_index(i, j))];
    return u;
}

double interior_sup(const ScalarField& r) {
    const Grid& g = r.grid;
    return par::max_over(
        g.size(), [&](std::int64_t k) { return std::abs(r[static_cast<int>(k)]); }, 0.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// solve_dirichlet

SolveResult solve_dirichlet(const PhaseField& theta, const ScalarField& boundary, const Grid& g,
                            const SolveConfig& cfg) {
    validate(cfg);
    if (!g.same_layout(theta.grid()) || !g.same_layout(boundary.grid))
        throw std::invalid_argument("solve_dirichlet: grid mismatch");
    for (double v : boundary.values)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_dirichlet: non-finite boundary data");

    const double dt = cfg.flow_dt > 0.0 ? cfg.flow_dt : 0.2 * g.h * g.h;

    // Initial guess: Delta u = 2 tan(Theta/2), exact at Theta = 0 and
    // consistent with the operator for small eigenvalues.
    ScalarField poisson_rhs(g);
    par::parallel_for(g.n, [&](std::int64_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = 0; i < g.n; ++i) poisson_rhs(i, j) = 2.0 * std::tan(0.5 * theta.theta(i, j));
    });
    ScalarField u0 = linear_dirichlet(
        g, [](int, int) { return Sym2{1.0, 0.0, 1.0}; }, poisson_rhs, boundary,
        std::min(cfg.krylov_tol, 1e-12), cfg.krylov_max_iter);

    PotentialField U(std::move(u0));
    ScalarField r = residual(U, theta);
    double rn = interior_sup(r);

    SolveResult out;
    out.history.push_back(rn);
    int stalls = 0;

    auto flow_fallback = [&]() -> bool {
        out.path = SolvePath::FlowThenNewton;
        const double target = 0.5 * rn;
        for (int step = 0; step < cfg.flow_steps_max; ++step) {
            ScalarField u_new = U.u();
            par::parallel_for(g.n - 2, [&](std::int64_t jj) {
                const int j = static_cast<int>(jj) + 1;
                for (int i = 1; i < g.n - 1; ++i) u_new(i, j) += dt * r(i, j);
            });
            U.update(std::move(u_new));
            r = residual(U, theta);
            rn = interior_sup(r);
            if (rn <= target) {
                out.history.push_back(rn);
                return true;
            }
        }
        return false;
    };

    for (int iter = 0; iter < cfg.max_newton; ++iter) {
        if (rn <= cfg.newton_tol) {
            out.residual_sup = rn;
            out.u = std::move(U);
            return out;
        }
        const NinePoint J = assemble(g, [&](int i, int j) { return linearized_coeffs(U.hessian_at(i, j)); });
        std::vector<double> nrhs(static_cast<std::size_t>(J.size()));
        par::parallel_for(J.m, [&](std::int64_t jj) {
            const int j = static_cast<int>(jj) + 1;
            for (int i = 1; i <= J.m; ++i)
                nrhs[static_cast<std::size_t>(J.vec_index(i, j))] = -r(i, j);
        });
        std::vector<double> delta;
        bicgstab(J, nrhs, delta, cfg.krylov_tol, cfg.krylov_max_iter);
        // a Krylov breakdown must not leak non-finite values into the iterate
        bool delta_finite = true;
        for (double v : delta)
            if (!std::isfinite(v)) {
                delta_finite = false;
                break;
            }
        if (!delta_finite) delta.assign(delta.size(), 0.0);

        // Backtracking on the residual sup-norm; accept the last trial even
        // without decrease so a stalled direction still counts as a step.
        double s = 1.0;
        bool reduced = false;
        ScalarField u_base = U.u();
        double rn_try = rn;
        for (int halve = 0; halve <= 20; ++halve) {
            ScalarField u_try = u_base;
            par::parallel_for(J.m, [&](std::int64_t jj) {
                const int j = static_cast<int>(jj) + 1;
                for (int i = 1; i <= J.m; ++i)
                    u_try(i, j) += s * delta[static_cast<std::size_t>(J.vec_index(i, j))];
            });
            U.update(std::move(u_try));
            rn_try = residual_sup(U, theta);
            if (rn_try < rn) {
                reduced = true;
                break;
            }
            s *= cfg.damping;
        }
        if (!reduced) {
            // leave the last (smallest-step) trial in place
            ++stalls;
        } else {
            stalls = 0;
        }
        r = residual(U, theta);
        rn = interior_sup(r);
        out.history.push_back(rn);
        ++out.iterations;

        if (stalls >= 3) {
            if (!flow_fallback())
                throw SolveFailure("solve_dirichlet: pseudo-time flow failed to halve the residual",
                                   out.history);
            stalls = 0;
        }
    }
    if (rn <= cfg.newton_tol) {
        out.residual_sup = rn;
        out.u = std::move(U);
        return out;
    }
    throw SolveFailure("solve_dirichlet: Newton did not reach the tolerance within max_newton steps",
                       out.history);
}

// ---------------------------------------------------------------------------
// Manufactured problems

ManufacturedProblem manufactured_problem(const Grid& g, const AnalyticPotential& u_star) {
    auto theta_value = [&](double x, double y) { return operator_F(u_star.hess(x, y)); };
    // Gradient by the chain rule through the linearization:
    // d_j Theta = sum_ab g^{ab} u_jab with g^{ab} = (I + H^2)^{-1}.
    auto theta_grad = [&](double x, double y) {
        const Sym2 H = u_star.hess(x, y);
        const Sym2 G = inverse_metric(H);
        const ThirdDerivs t = u_star.third(x, y);
        return Vec2{G.a11 * t.t111 + 2.0 * G.a12 * t.t112 + G.a22 * t.t122,
                    G.a11 * t.t112 + 2.0 * G.a12 * t.t122 + G.a22 * t.t222};
    };
    auto theta_hess = [&](double x, double y) {
        const double gxx = diff5([&](double t) { return theta_grad(t, y).x; }, x);
        const double gyy = diff5([&](double t) { return theta_grad(x, t).y; }, y);
        const double gxy = 0.5 * (diff5([&](double t) { return theta_grad(x, t).x; }, y) +
                                  diff5([&](double t) { return theta_grad(t, y).y; }, x));
        return Sym2{gxx, gxy, gyy};
    };

    for (int corner = 0; corner < 4; ++corner) {
        const double x = corner % 2 == 0 ? g.origin.x : g.origin.x + g.extent.x;
        const double y = corner / 2 == 0 ? g.origin.y : g.origin.y + g.extent.y;
        if (!(std::abs(theta_value(x, y)) < kPi))
            throw std::domain_error("manufactured_problem: phase leaves (-pi, pi)");
    }

    ManufacturedProblem out;
    out.theta = make_phase(g, Analytic2{theta_value, theta_grad, theta_hess});
    out.boundary = sample(g, u_star.value);
    out.u_exact = out.boundary;
    return out;
}

}  // namespace lmc
