#include "lmc/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "lmc/parallel.hpp"
#include "lmc/phase.hpp"
#include "lmc/solver.hpp"

namespace lmc {

HessianSpectrum hessian_spectrum(const Sym2& H) {
    if (!std::isfinite(H.a11) || !std::isfinite(H.a12) || !std::isfinite(H.a22))
        throw std::invalid_argument("hessian_spectrum: non-finite entries");
    const double a = H.a11, b = H.a22, c = H.a12;
    const double t = 0.5 * (a + b);
    const double r = std::hypot(0.5 * (a - b), c);
    const double det = a * b - c * c;

    HessianSpectrum s;
    if (r == 0.0) {
        s.lambda1 = s.lambda2 = t;
        s.angle = 0.0;
        return s;
    }
    // Recover the small-magnitude eigenvalue from det/large for relative accuracy.
    if (t >= 0.0) {
        s.lambda1 = t + r;
        s.lambda2 = s.lambda1 != 0.0 ? det / s.lambda1 : t - r;
    } else {
        s.lambda2 = t - r;
        s.lambda1 = det / s.lambda2;
    }
    if (s.lambda2 > s.lambda1) s.lambda2 = s.lambda1;
    s.angle = 0.5 * std::atan2(2.0 * c, a - b);
    return s;
}

MetricData metric_data(const HessianSpectrum& spec) {
    if (!std::isfinite(spec.lambda1) || !std::isfinite(spec.lambda2))
        throw std::invalid_argument("metric_data: non-finite eigenvalues");
    const double l1 = spec.lambda1, l2 = spec.lambda2;
    MetricData m;
    m.g11 = 1.0 / (1.0 + l1 * l1);
    m.g22 = 1.0 / (1.0 + l2 * l2);
    m.V = std::sqrt(1.0 + l1 * l1) * std::sqrt(1.0 + l2 * l2);
    m.b = 0.5 * (std::log1p(l1 * l1) + std::log1p(l2 * l2));
    m.sigma1 = l1 + l2;
    m.sigma2 = l1 * l2;
    return m;
}

FrameData second_fundamental_form(const ThirdDerivs& ft, const HessianSpectrum& spec) {
    const double s1 = 1.0 / std::sqrt(1.0 + spec.lambda1 * spec.lambda1);
    const double s2 = 1.0 / std::sqrt(1.0 + spec.lambda2 * spec.lambda2);
    FrameData h;
    h.h111 = s1 * s1 * s1 * ft.t111;
    h.h112 = s1 * s1 * s2 * ft.t112;
    h.h122 = s1 * s2 * s2 * ft.t122;
    h.h222 = s2 * s2 * s2 * ft.t222;
    return h;
}

namespace {
// component of the symmetric 3-tensor by number of '2' indices
inline double pick(const ThirdDerivs& t, int twos) {
    switch (twos) {
        case 0: return t.t111;
        case 1: return t.t112;
        case 2: return t.t122;
        default: return t.t222;
    }
}
}  // namespace

ThirdDerivs rotate_third_derivatives(const ThirdDerivs& t, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    // Columns of R are the rotated basis vectors: e1' = (c, s), e2' = (-s, c).
    const double R[2][2] = {{c, -s}, {s, c}};
    auto component = [&](int a, int b, int cc) {
        double acc = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    acc += R[i][a] * R[j][b] * R[k][cc] * pick(t, i + j + k);
        return acc;
    };
    return {component(0, 0, 0), component(0, 0, 1), component(0, 1, 1), component(1, 1, 1)};
}

GeometryFrame geometry_frame_at(const PotentialField& u, int i, int j, bool with_frame) {
    GeometryFrame f;
    f.spectrum = hessian_spectrum(u.hessian_at(i, j));
    f.metric = metric_data(f.spectrum);
    if (with_frame) {
        double angle = f.spectrum.angle;
        if (std::abs(f.spectrum.lambda1 - f.spectrum.lambda2) <
            1e-9 * (1.0 + std::abs(f.spectrum.lambda1)))
            angle = 0.0;
        const ThirdDerivs rotated = rotate_third_derivatives(u.third_at(i, j), angle);
        f.frame = second_fundamental_form(rotated, f.spectrum);
    }
    return f;
}

Sym2 inverse_metric(const Sym2& H) {
    // M = I + H^2
    const double m11 = 1.0 + H.a11 * H.a11 + H.a12 * H.a12;
    const double m12 = H.a12 * (H.a11 + H.a22);
    const double m22 = 1.0 + H.a12 * H.a12 + H.a22 * H.a22;
    const double det = m11 * m22 - m12 * m12;
    return {m22 / det, -m12 / det, m11 / det};
}

ScalarField laplace_beltrami(const ScalarField& v, const PotentialField& u, const PhaseField& theta) {
    const Grid& g = v.grid;
    if (!g.same_layout(u.grid()) || !g.same_layout(theta.grid()))
        throw std::invalid_argument("laplace_beltrami: fields on different grids");

    const ScalarField vx = diff(v, 1, 0), vy = diff(v, 0, 1);
    const ScalarField vxx = diff(v, 2, 0), vxy = diff(v, 1, 1), vyy = diff(v, 0, 2);

    ScalarField out(g);
    par::parallel_for(g.n, [&](std::int64_t j64) {
        const int j = static_cast<int>(j64);
        for (int i = 0; i < g.n; ++i) {
            const Sym2 H = u.hessian_at(i, j);
            const Sym2 gin = inverse_metric(H);
            const double second =
                gin.a11 * vxx(i, j) + 2.0 * gin.a12 * vxy(i, j) + gin.a22 * vyy(i, j);
            // drift coefficient c_j = sum_{p,q} g^{jp} u_pq Theta_q
            const double tx = theta.dtheta_x(i, j), ty = theta.dtheta_y(i, j);
            const double w1 = H.a11 * tx + H.a12 * ty;  // (u . DTheta)_1
            const double w2 = H.a12 * tx + H.a22 * ty;
            const double c1 = gin.a11 * w1 + gin.a12 * w2;
            const double c2 = gin.a12 * w1 + gin.a22 * w2;
            out(i, j) = second - c1 * vx(i, j) - c2 * vy(i, j);
        }
    });
    return out;
}

ScalarField grad_norm_g(const ScalarField& v, const PotentialField& u) {
    const Grid& g = v.grid;
    if (!g.same_layout(u.grid()))
        throw std::invalid_argument("grad_norm_g: fields on different grids");
    const ScalarField vx = diff(v, 1, 0), vy = diff(v, 0, 1);
    ScalarField out(g);
    par::parallel_for(g.n, [&](std::int64_t j64) {
        const int j = static_cast<int>(j64);
        for (int i = 0; i < g.n; ++i) {
            const Sym2 gin = inverse_metric(u.hessian_at(i, j));
            const double a = vx(i, j), b = vy(i, j);
            out(i, j) = gin.a11 * a * a + 2.0 * gin.a12 * a * b + gin.a22 * b * b;
        }
    });
    return out;
}

}  // namespace lmc
