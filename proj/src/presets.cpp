#include "lmc/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace lmc::presets {

AnalyticPotential potential(const std::string& name, double p1, double p2) {
    AnalyticPotential p;
    if (name == "harmonic_quadratic") {
        p.value = [p1](double x, double y) { return 0.5 * p1 * (x * x - y * y); };
        p.grad = [p1](double x, double y) { return Vec2{p1 * x, -p1 * y}; };
        p.hess = [p1](double, double) { return Sym2{p1, 0.0, -p1}; };
        p.third = [](double, double) { return ThirdDerivs{}; };
    } else if (name == "isotropic_quadratic") {
        p.value = [p1](double x, double y) { return 0.5 * p1 * (x * x + y * y); };
        p.grad = [p1](double x, double y) { return Vec2{p1 * x, p1 * y}; };
        p.hess = [p1](double, double) { return Sym2{p1, 0.0, p1}; };
        p.third = [](double, double) { return ThirdDerivs{}; };
    } else if (name == "isotropic_tilted") {
        p.value = [p1, p2](double x, double y) { return 0.5 * p1 * (x * x + y * y) + p2 * x; };
        p.grad = [p1, p2](double x, double y) { return Vec2{p1 * x + p2, p1 * y}; };
        p.hess = [p1](double, double) { return Sym2{p1, 0.0, p1}; };
        p.third = [](double, double) { return ThirdDerivs{}; };
    } else if (name == "sin_bump") {
        p.value = [p1](double x, double y) {
            return 0.5 * (x * x + y * y) + p1 * std::sin(x) * std::sin(y);
        };
        p.grad = [p1](double x, double y) {
            return Vec2{x + p1 * std::cos(x) * std::sin(y), y + p1 * std::sin(x) * std::cos(y)};
        };
        p.hess = [p1](double x, double y) {
            return Sym2{1.0 - p1 * std::sin(x) * std::sin(y), p1 * std::cos(x) * std::cos(y),
                        1.0 - p1 * std::sin(x) * std::sin(y)};
        };
        p.third = [p1](double x, double y) {
            return ThirdDerivs{-p1 * std::cos(x) * std::sin(y), -p1 * std::sin(x) * std::cos(y),
                               -p1 * std::cos(x) * std::sin(y), -p1 * std::sin(x) * std::cos(y)};
        };
    } else if (name == "saddle_scaled") {
        p.value = [p1, p2](double x, double y) { return 0.5 * p1 * (x * x - y * y) + p2 * x * y; };
        p.grad = [p1, p2](double x, double y) { return Vec2{p1 * x + p2 * y, -p1 * y + p2 * x}; };
        p.hess = [p1, p2](double, double) { return Sym2{p1, p2, -p1}; };
        p.third = [](double, double) { return ThirdDerivs{}; };
    } else {
        throw std::invalid_argument("unknown potential preset: " + name);
    }
    return p;
}

std::vector<std::string> potential_names() {
    return {"harmonic_quadratic", "isotropic_quadratic", "isotropic_tilted", "sin_bump",
            "saddle_scaled"};
}

}  // namespace lmc::presets
