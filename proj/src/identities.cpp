#include "lmc/identities.hpp"

#include <cmath>
#include <stdexcept>

#include "lmc/rng.hpp"

namespace lmc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double g11_of(const FrameSample& s) { return 1.0 / (1.0 + s.lambda1 * s.lambda1); }
double g22_of(const FrameSample& s) { return 1.0 / (1.0 + s.lambda2 * s.lambda2); }

struct BGrad {
    double b1;  // d_1 b = (l1 h111 + l2 h122) / sqrt(g11)
    double b2;
};

BGrad b_gradient(const FrameSample& s) {
    const double sg1 = std::sqrt(g11_of(s));
    const double sg2 = std::sqrt(g22_of(s));
    return {(s.lambda1 * s.h111 + s.lambda2 * s.h122) / sg1,
            (s.lambda1 * s.h112 + s.lambda2 * s.h222) / sg2};
}

}  // namespace

FrameSample impose_dpsi(FrameSample s) {
    s.h111 = std::sqrt(g11_of(s)) * s.dtheta.x - s.h122;
    s.h222 = std::sqrt(g22_of(s)) * s.dtheta.y - s.h112;
    return s;
}

Vec2 dpsi_residual(const FrameSample& s) {
    return {s.h111 + s.h122 - std::sqrt(g11_of(s)) * s.dtheta.x,
            s.h112 + s.h222 - std::sqrt(g22_of(s)) * s.dtheta.y};
}

FrameSample reflect_sample(const FrameSample& s) {
    FrameSample r;
    r.lambda1 = -s.lambda2;
    r.lambda2 = -s.lambda1;
    r.h111 = -s.h222;
    r.h112 = -s.h122;
    r.h122 = -s.h112;
    r.h222 = -s.h111;
    r.theta = -s.theta;
    r.dtheta = {-s.dtheta.y, -s.dtheta.x};
    r.d2theta_diag = {-s.d2theta_diag.y, -s.d2theta_diag.x};
    return r;
}

double lemma31_direct(const FrameSample& s) {
    const double l1 = s.lambda1, l2 = s.lambda2;
    const double mc = (1.0 + l1 * l1) * s.h111 * s.h111 +
                      (3.0 + l1 * l1 + 2.0 * l1 * l2) * s.h112 * s.h112 +
                      (3.0 + l2 * l2 + 2.0 * l1 * l2) * s.h122 * s.h122 +
                      (1.0 + l2 * l2) * s.h222 * s.h222;
    const double curv = g11_of(s) * l1 * s.d2theta_diag.x + g22_of(s) * l2 * s.d2theta_diag.y;
    const BGrad db = b_gradient(s);
    const double drift = g11_of(s) * l1 * s.dtheta.x * db.b1 + g22_of(s) * l2 * s.dtheta.y * db.b2;
    return mc + curv - drift;
}

double gradnorm_direct(const FrameSample& s) {
    const double l1 = s.lambda1, l2 = s.lambda2;
    const double g11 = g11_of(s), g22 = g22_of(s);
    const double d = l1 - l2;
    return (s.h112 * s.h112 + s.h122 * s.h122) * d * d + g11 * l1 * l1 * s.dtheta.x * s.dtheta.x +
           g22 * l2 * l2 * s.dtheta.y * s.dtheta.y +
           2.0 * s.h122 * l1 * (l2 - l1) * std::sqrt(g11) * s.dtheta.x +
           2.0 * s.h112 * l2 * (l1 - l2) * std::sqrt(g22) * s.dtheta.y;
}

double case1_assembled(const FrameSample& s, double eps) {
    const double l1 = s.lambda1, l2 = s.lambda2;
    const double g11 = g11_of(s), g22 = g22_of(s);
    const double s1 = l1 + l2, d = l1 - l2;
    const double hterm = (s.h112 * s.h112 + s.h122 * s.h122) * (4.0 + s1 * s1 - eps * d * d);
    const double cross1 = std::sqrt(g11) * s.dtheta.x * s.h122 *
                          (-(1.0 - 2.0 * eps) * l1 * l1 - (1.0 + 2.0 * eps) * l1 * l2 - 2.0);
    const double cross2 = std::sqrt(g22) * s.dtheta.y * s.h112 *
                          (-(1.0 - 2.0 * eps) * l2 * l2 - (1.0 + 2.0 * eps) * l1 * l2 - 2.0);
    const double sq = g11 * s.dtheta.x * s.dtheta.x * (1.0 - eps * l1 * l1) +
                      g22 * s.dtheta.y * s.dtheta.y * (1.0 - eps * l2 * l2);
    const double curv = g11 * l1 * s.d2theta_diag.x + g22 * l2 * s.d2theta_diag.y;
    return hterm + cross1 + cross2 + sq + curv;
}

namespace {

// Magnitude of the participating terms, for cancellation-aware relative error.
double identity_scale(const FrameSample& s, double eps) {
    const double l1 = s.lambda1, l2 = s.lambda2;
    const double g11 = g11_of(s), g22 = g22_of(s);
    const double s1 = l1 + l2, d = l1 - l2;
    double m = 1.0;
    m += (s.h112 * s.h112 + s.h122 * s.h122) * (4.0 + s1 * s1 + std::abs(eps) * d * d);
    m += std::abs(std::sqrt(g11) * s.dtheta.x * s.h122) *
         (std::abs(1.0 - 2.0 * eps) * l1 * l1 + std::abs(1.0 + 2.0 * eps) * std::abs(l1 * l2) + 2.0);
    m += std::abs(std::sqrt(g22) * s.dtheta.y * s.h112) *
         (std::abs(1.0 - 2.0 * eps) * l2 * l2 + std::abs(1.0 + 2.0 * eps) * std::abs(l1 * l2) + 2.0);
    m += g11 * s.dtheta.x * s.dtheta.x * (1.0 + std::abs(eps) * l1 * l1);
    m += g22 * s.dtheta.y * s.dtheta.y * (1.0 + std::abs(eps) * l2 * l2);
    m += std::abs(g11 * l1 * s.d2theta_diag.x) + std::abs(g22 * l2 * s.d2theta_diag.y);
    m += (1.0 + l1 * l1) * s.h111 * s.h111 + (1.0 + l2 * l2) * s.h222 * s.h222 +
         (3.0 + l1 * l1 + 2.0 * std::abs(l1 * l2)) * s.h112 * s.h112 +
         (3.0 + l2 * l2 + 2.0 * std::abs(l1 * l2)) * s.h122 * s.h122;
    const BGrad db = b_gradient(s);
    m += std::abs(g11 * l1 * s.dtheta.x * db.b1) + std::abs(g22 * l2 * s.dtheta.y * db.b2);
    m += std::abs(eps) * (std::abs(gradnorm_direct(s)) +
                          2.0 * std::abs(s.h122 * l1 * d * std::sqrt(g11) * s.dtheta.x) +
                          2.0 * std::abs(s.h112 * l2 * d * std::sqrt(g22) * s.dtheta.y));
    return m;
}

}  // namespace

double identity_rel_defect(const FrameSample& s, double eps) {
    const double lhs = case1_assembled(s, eps);
    const double rhs = lemma31_direct(s) - eps * gradnorm_direct(s);
    return std::abs(lhs - rhs) / identity_scale(s, eps);
}

DiscriminantResult discriminant_check(double theta) {
    if (!(theta > 0.0 && theta <= kPi / 2))
        throw std::invalid_argument("discriminant_check: theta must be in (0, pi/2]");
    const double sn = std::sin(theta);
    DiscriminantResult r;
    r.quartic = 23.0 - 8.0 * sn - 15.0 * sn * sn;
    const double eps = sn / 4.0, eta = sn;
    const double ct = std::cos(theta) / sn;
    const double lhs = ct * ct * (eta + 6.0 * eps) * (eta + 6.0 * eps);
    const double rhs = 4.0 * (1.0 - 2.0 * eps - eta / 2.0) * (3.0 + eta + 6.0 * eps);
    const double scale = std::abs(lhs) + std::abs(rhs) + 1.0;
    r.ok = r.quartic >= -1e-12 && lhs <= rhs + 1e-12 * scale;
    return r;
}

bool appendix_lambda2_check(double x) {
    if (!(x > 0.0 && x <= 1.0))
        throw std::invalid_argument("appendix_lambda2_check: x must be in (0, 1]");
    const double f = std::atan(x) - (kPi / 4.0) * x;
    if (f < -1e-15) return false;
    const double xstar = std::sqrt(4.0 / kPi - 1.0);
    auto fprime = [](double t) { return 1.0 / (1.0 + t * t) - kPi / 4.0; };
    return std::abs(fprime(xstar)) <= 1e-12 && fprime(0.99 * xstar) > 0.0 &&
           fprime(1.01 * xstar) < 0.0;
}

bool appendix_lambda1_check(double y, double p) {
    if (!(y >= 0.0 && y <= 1.0 && p > 0.0 && p <= 1.0))
        throw std::invalid_argument("appendix_lambda1_check: need y in [0,1], p in (0,1]");
    const double C = std::pow(2.0, p / 2.0) * kPi / p;
    const double f = C * std::pow(y, p) / std::pow(1.0 + y * y, p / 2.0) - std::atan(y);
    if (f < -1e-14) return false;
    if (!(C > std::pow(2.0, p / 2.0) * kPi / 4.0)) return false;
    if (!(p * C / std::pow(2.0, p / 2.0) > 1.0)) return false;
    auto gfun = [&](double t) { return p * C / (std::pow(t, 1.0 - p) * std::pow(1.0 + t * t, p / 2.0)); };
    double prev = gfun(1e-3);
    for (int k = 1; k <= 1000; ++k) {
        const double t = 1e-3 + (1.0 - 1e-3) * k / 1000.0;
        const double cur = gfun(t);
        if (!(cur < prev)) return false;
        prev = cur;
    }
    return true;
}

ChainReport chain_to_b_check(double lambda1, double lambda2, double p) {
    if (!(lambda1 > 1.0))
        throw std::invalid_argument("chain_to_b_check: lambda1 must exceed 1");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("chain_to_b_check: p must be in (0,1]");
    ChainReport r;
    r.C = std::pow(2.0, p / 2.0) * kPi / p;
    const double q1 = 1.0 + lambda1 * lambda1;
    const double q2 = 1.0 + lambda2 * lambda2;
    r.V = std::sqrt(q1) * std::sqrt(q2);
    r.b = 0.5 * (std::log1p(lambda1 * lambda1) + std::log1p(lambda2 * lambda2));
    const double bbar = r.b;

    const double link1_rhs = r.C / std::pow(q1, p / 2.0);
    r.arctan_link = std::atan(1.0 / lambda1) < link1_rhs;
    const double link2_rhs = r.C / (std::pow(q1, p / 4.0) * std::pow(q2, p / 4.0));
    r.pairing_link = link1_rhs <= link2_rhs * (1.0 + 1e-14);
    const double link3_rhs = r.C / std::pow(r.V, p / 8.0);
    r.power_link = link2_rhs <= link3_rhs * (1.0 + 1e-14);
    r.log_power_applicable = r.b <= std::pow(r.V, p / 8.0);
    r.log_link = r.log_power_applicable && link3_rhs <= r.C / r.b * (1.0 + 1e-14);
    r.bbar_link = bbar <= r.b;
    r.conjunction = r.arctan_link && r.pairing_link && r.power_link && r.log_link && r.bbar_link;
    return r;
}

bool mvt_lemma_check(MvtProfile profile, double lo, double hi, double p) {
    const int nscan = 2000;
    switch (profile) {
        case MvtProfile::ArctanMinusLine: {
            // f' >= 0 scan on [lo, hi] (hi should not exceed sqrt(4/pi - 1))
            for (int k = 0; k <= nscan; ++k) {
                const double x = lo + (hi - lo) * k / nscan;
                if (1.0 / (1.0 + x * x) - kPi / 4.0 < -1e-13) return false;
            }
            return true;
        }
        case MvtProfile::PowerMinusArctan: {
            const double C = std::pow(2.0, p / 2.0) * kPi / p;
            for (int k = 0; k <= nscan; ++k) {
                const double y = lo + (hi - lo) * k / nscan;
                const double f = C * std::pow(y, p) / std::pow(1.0 + y * y, p / 2.0) - std::atan(y);
                if (f < -1e-14) return false;
            }
            return true;
        }
        case MvtProfile::Zero:
            return true;
    }
    return false;
}

namespace {

double certificate_tol(double scale) { return 1e-9 * scale; }

CertificateResult case4_certificate(const FrameSample& s) {
    // Theta(x0) = 0 with DTheta(x0) = 0: Delta_g b >= -2 |D^2 Theta|.
    const double lhs = lemma31_direct(s);
    const double rhs = -2.0 * std::max(std::abs(s.d2theta_diag.x), std::abs(s.d2theta_diag.y));
    CertificateResult r;
    r.scale = 1.0 + std::abs(lhs) + std::abs(rhs);
    r.defect = lhs - rhs;
    r.pass = r.defect >= -certificate_tol(r.scale);
    return r;
}

}  // namespace

CertificateResult case1_certificate(const FrameSample& s) {
    if (s.theta < 1e-6) {
        FrameSample z = s;
        z.dtheta = {0.0, 0.0};
        z = impose_dpsi(z);
        return case4_certificate(z);
    }
    const double eps = std::sin(s.theta) / 4.0;
    const double lhs = lemma31_direct(s) - eps * gradnorm_direct(s);
    const double dth2 = s.dtheta.x * s.dtheta.x + s.dtheta.y * s.dtheta.y;
    const double rhs = -dth2 * (1.5 + 1.0 / std::sin(s.theta)) +
                       g11_of(s) * s.lambda1 * s.d2theta_diag.x +
                       g22_of(s) * s.lambda2 * s.d2theta_diag.y;
    CertificateResult r;
    r.scale = 1.0 + identity_scale(s, eps) + std::abs(rhs) + dth2 * (1.5 + 1.0 / std::sin(s.theta));
    r.defect = lhs - rhs;
    r.pass = r.defect >= -certificate_tol(r.scale);
    return r;
}

CertificateResult case2_certificate(const FrameSample& s) {
    const double lhs = lemma31_direct(s);
    const double dth2 = s.dtheta.x * s.dtheta.x + s.dtheta.y * s.dtheta.y;
    const double d2max = std::max(std::abs(s.d2theta_diag.x), std::abs(s.d2theta_diag.y));
    const double rhs = 0.375 * gradnorm_direct(s) - 2.0 * dth2 - 2.0 * d2max;
    CertificateResult r;
    r.scale = 1.0 + identity_scale(s, 0.375) + std::abs(rhs);
    r.defect = lhs - rhs;
    r.pass = r.defect >= -certificate_tol(r.scale);
    return r;
}

CertificateResult case2_half_gradnorm_display(const FrameSample& s) {
    const BGrad db = b_gradient(s);
    const double g11 = g11_of(s), g22 = g22_of(s);
    const double gradsq = g11 * db.b1 * db.b1 + g22 * db.b2 * db.b2;
    const double l1s = s.lambda1 * s.lambda1, l2s = s.lambda2 * s.lambda2;
    const double rhs = s.h111 * s.h111 * l1s + s.h112 * s.h112 * l1s + s.h122 * s.h122 * l2s +
                       s.h222 * s.h222 * l2s;
    CertificateResult r;
    r.scale = 1.0 + gradsq + rhs;
    r.defect = rhs - 0.5 * gradsq;
    r.pass = r.defect >= -certificate_tol(r.scale);
    return r;
}

// ---------------------------------------------------------------------------
// Samplers

FrameSample sample_constrained(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 rng = stream_for(seed, index);
    FrameSample s;
    const double a = rng.signed_log_uniform(1e-3, 1e3);
    const double b = rng.signed_log_uniform(1e-3, 1e3);
    s.lambda1 = std::max(a, b);
    s.lambda2 = std::min(a, b);
    s.h112 = rng.normal(10.0);
    s.h122 = rng.normal(10.0);
    s.theta = rng.uniform(-kPi + 1e-9, kPi - 1e-9);
    s.dtheta = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    s.d2theta_diag = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    return impose_dpsi(s);
}

FrameSample sample_case1(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 rng = stream_for(seed, index);
    FrameSample s;
    const double m1 = std::abs(rng.signed_log_uniform(1e-3, 1e3));
    double m2 = std::abs(rng.signed_log_uniform(1e-3, 1e3));
    if (m2 > m1) m2 = m1 * rng.next_unit();  // keep sigma1 = m1 - m2 >= 0
    s.lambda1 = m1;
    s.lambda2 = -m2;
    s.theta = std::atan(s.lambda1) + std::atan(s.lambda2);
    s.h112 = rng.normal(10.0);
    s.h122 = rng.normal(10.0);
    s.dtheta = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    s.d2theta_diag = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    return impose_dpsi(s);
}

FrameSample sample_case2(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 rng = stream_for(seed, index);
    FrameSample s;
    const double m1 = std::exp(rng.uniform(std::log(1e-3), std::log(1e3)));
    // theta > pi/2 needs lambda2 > 1/lambda1
    const double lo = 1.000001 / m1;
    const double m2 = std::exp(rng.uniform(std::log(lo), std::log(std::max(2e3, 2.0 * lo))));
    s.lambda1 = std::max(m1, m2);
    s.lambda2 = std::min(m1, m2);
    s.theta = std::atan(s.lambda1) + std::atan(s.lambda2);
    s.h112 = rng.normal(10.0);
    s.h122 = rng.normal(10.0);
    s.dtheta = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    s.d2theta_diag = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    return impose_dpsi(s);
}

}  // namespace lmc
