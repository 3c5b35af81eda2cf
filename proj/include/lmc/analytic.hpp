#pragma once

// Closed-form scalar functions on the plane with analytic derivatives, used
// for phase construction and manufactured problems.

#include <functional>

#include "lmc/geometry.hpp"
#include "lmc/grid.hpp"

namespace lmc {

struct Analytic2 {
    std::function<double(double, double)> value;
    std::function<Vec2(double, double)> grad;
    std::function<Sym2(double, double)> hess;
};

// Adds analytic third derivatives, needed by manufactured phases.
struct AnalyticPotential {
    std::function<double(double, double)> value;
    std::function<Vec2(double, double)> grad;
    std::function<Sym2(double, double)> hess;
    std::function<ThirdDerivs(double, double)> third;
};

inline Analytic2 constant_fn(double c) {
    return {[c](double, double) { return c; },
            [](double, double) { return Vec2{0.0, 0.0}; },
            [](double, double) { return Sym2{0.0, 0.0, 0.0}; }};
}

// Affine s(x, y) = c0 + cx*x + cy*y.
inline Analytic2 affine_fn(double c0, double cx, double cy) {
    return {[=](double x, double y) { return c0 + cx * x + cy * y; },
            [=](double, double) { return Vec2{cx, cy}; },
            [](double, double) { return Sym2{0.0, 0.0, 0.0}; }};
}

// 4th-order central difference of a 1-D slice of f, used where an analytic
// derivative formula is not worth deriving (error ~1e-12 at step 1e-3).
double diff5(const std::function<double(double)>& f, double x, double step = 1e-3);

}  // namespace lmc
