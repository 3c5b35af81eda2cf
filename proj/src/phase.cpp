#include "lmc/phase.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lmc/parallel.hpp"

namespace lmc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double spectral_norm(const Sym2& m) {
    return std::abs(0.5 * (m.a11 + m.a22)) + std::hypot(0.5 * (m.a11 - m.a22), m.a12);
}

void validate_phase(const PhaseField& p) {
    const Grid& g = p.grid();
    const double h2 = g.h * g.h;
    const double tol = tol_zero(g.h, p.norm_d2);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double th = p.theta(i, j);
            if (!(std::abs(th) < kPi))
                throw std::domain_error("phase range violation: |Theta| >= pi at a node");
            if (std::abs(th) <= h2) {
                const double dth = std::hypot(p.dtheta_x(i, j), p.dtheta_y(i, j));
                if (dth > tol)
                    throw std::domain_error(
                        "phase zero-set gradient violation: |DTheta| exceeds the discrete witness "
                        "tolerance on {Theta ~ 0}");
            }
        }
}

}  // namespace

double tol_zero(double h, double norm_d2) { return 10.0 * h * std::sqrt(1.0 + norm_d2); }

PhaseField make_phase(const Grid& g, const Analytic2& f) {
    PhaseField p;
    p.theta = ScalarField(g);
    p.dtheta_x = ScalarField(g);
    p.dtheta_y = ScalarField(g);
    p.d2_xx = ScalarField(g);
    p.d2_xy = ScalarField(g);
    p.d2_yy = ScalarField(g);
    par::parallel_for(g.n, [&](std::int64_t j64) {
        const int j = static_cast<int>(j64);
        for (int i = 0; i < g.n; ++i) {
            const double x = g.x(i), y = g.y(j);
            p.theta(i, j) = f.value(x, y);
            const Vec2 dv = f.grad(x, y);
            p.dtheta_x(i, j) = dv.x;
            p.dtheta_y(i, j) = dv.y;
            const Sym2 hv = f.hess(x, y);
            p.d2_xx(i, j) = hv.a11;
            p.d2_xy(i, j) = hv.a12;
            p.d2_yy(i, j) = hv.a22;
        }
    });
    p.norm_d1 = par::max_over(
        g.size(), [&](std::int64_t k) { return std::hypot(p.dtheta_x[static_cast<int>(k)], p.dtheta_y[static_cast<int>(k)]); },
        0.0);
    p.norm_d2 = par::max_over(
        g.size(),
        [&](std::int64_t k) {
            const int kk = static_cast<int>(k);
            return spectral_norm({p.d2_xx[kk], p.d2_xy[kk], p.d2_yy[kk]});
        },
        0.0);
    validate_phase(p);
    return p;
}

PhaseField build_phase_cubic(const Grid& g, const Analytic2& s, double amplitude) {
    Analytic2 cubic;
    cubic.value = [s, amplitude](double x, double y) {
        const double v = s.value(x, y);
        return amplitude * v * v * v;
    };
    cubic.grad = [s, amplitude](double x, double y) {
        const double v = s.value(x, y);
        const Vec2 dv = s.grad(x, y);
        return Vec2{3.0 * amplitude * v * v * dv.x, 3.0 * amplitude * v * v * dv.y};
    };
    cubic.hess = [s, amplitude](double x, double y) {
        const double v = s.value(x, y);
        const Vec2 dv = s.grad(x, y);
        const Sym2 hv = s.hess(x, y);
        return Sym2{6.0 * amplitude * v * dv.x * dv.x + 3.0 * amplitude * v * v * hv.a11,
                    6.0 * amplitude * v * dv.x * dv.y + 3.0 * amplitude * v * v * hv.a12,
                    6.0 * amplitude * v * dv.y * dv.y + 3.0 * amplitude * v * v * hv.a22};
    };
    return make_phase(g, cubic);
}

PhaseField build_phase_signed(const Grid& g, const PhaseSpec& spec) {
    switch (spec.kind) {
        case PhaseKind::Constant:
            return make_phase(g, constant_fn(spec.value));
        case PhaseKind::SupercriticalConstant: {
            if (!(std::abs(spec.value) > kPi / 2))
                throw std::invalid_argument("build_phase_signed: supercritical constant needs |c| > pi/2");
            return make_phase(g, constant_fn(spec.value));
        }
        case PhaseKind::SignChangingCubic:
            return build_phase_cubic(g, affine_fn(spec.c0, spec.cx, spec.cy), spec.amplitude);
    }
    throw std::invalid_argument("build_phase_signed: unknown kind");
}

EstimateReport check_interpolation(const ScalarField& f, const Region& region) {
    const Grid& g = f.grid;
    const Region reg = with_margin(g, region, 3);

    for (int k : reg.nodes)
        if (f[k] < 0.0)
            throw std::invalid_argument("check_interpolation: f negative in region");

    const ScalarField fx = diff(f, 1, 0), fy = diff(f, 0, 1);
    const ScalarField fxx = diff(f, 2, 0), fxy = diff(f, 1, 1), fyy = diff(f, 0, 2);

    const double d2norm = par::max_over(
        static_cast<std::int64_t>(reg.nodes.size()),
        [&](std::int64_t k) {
            const int kk = reg.nodes[static_cast<std::size_t>(k)];
            return spectral_norm({fxx[kk], fxy[kk], fyy[kk]});
        },
        0.0);

    EstimateReport rep;
    rep.name = "interpolation";
    rep.worst_defect = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (int k : reg.nodes) {
        const double lhs = fx[k] * fx[k] + fy[k] * fy[k];
        const double rhs = 2.0 * f[k] * d2norm;
        if (rhs > scale) scale = rhs;
        if (lhs > scale) scale = lhs;
        const double defect = rhs - lhs;
        if (defect < rep.worst_defect) {
            rep.worst_defect = defect;
            rep.lhs = lhs;
            rep.rhs = rhs;
            rep.loc_i = k % g.n;
            rep.loc_j = k / g.n;
        }
    }
    // kink-scale discretization artifacts: a C^{1,1} kink between nodes puts
    // an O(h^2) spurious gradient where f ~ 0, i.e. an O(h^4) lhs excess
    const double h = g.h;
    rep.tolerance = 1e-9 * scale + 30.0 * h * h * h * h * (1.0 + d2norm) * (1.0 + d2norm);
    return finish_report(rep);
}

EstimateReport check_interpolation_weighted(const ScalarField& f, Vec2 center, double R) {
    const Grid& g = f.grid;
    const Region reg = with_margin(g, ball_region(g, center, R), 3);

    for (int k : reg.nodes)
        if (f[k] < 0.0)
            throw std::invalid_argument("check_interpolation_weighted: f negative in region");

    const ScalarField fx = diff(f, 1, 0), fy = diff(f, 0, 1);
    const ScalarField fxx = diff(f, 2, 0), fxy = diff(f, 1, 1), fyy = diff(f, 0, 2);
    const double d2norm = par::max_over(
        static_cast<std::int64_t>(reg.nodes.size()),
        [&](std::int64_t k) {
            const int kk = reg.nodes[static_cast<std::size_t>(k)];
            return spectral_norm({fxx[kk], fxy[kk], fyy[kk]});
        },
        0.0);

    EstimateReport rep;
    rep.name = "interpolation_weighted";
    rep.worst_defect = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (int k : reg.nodes) {
        const int i = k % g.n, j = k / g.n;
        const Vec2 xt = (1.0 / R) * (g.node(i, j) - center);
        const double w = 1.0 - dot(xt, xt);
        if (w <= 1e-12) continue;
        const double lhs = fx[k] * fx[k] + fy[k] * fy[k];
        const double rhs = f[k] * f[k] / w + 2.0 * d2norm * std::abs(f[k]);
        if (rhs > scale) scale = rhs;
        if (lhs > scale) scale = lhs;
        const double defect = rhs - lhs;
        if (defect < rep.worst_defect) {
            rep.worst_defect = defect;
            rep.lhs = lhs;
            rep.rhs = rhs;
            rep.loc_i = i;
            rep.loc_j = j;
        }
    }
    const double h = g.h;
    rep.tolerance = 1e-9 * scale + 30.0 * h * h * h * h * (1.0 + d2norm) * (1.0 + d2norm);
    return finish_report(rep);
}

}  // namespace lmc
