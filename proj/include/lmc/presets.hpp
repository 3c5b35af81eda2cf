#pragma once

// Named analytic potential presets with two numeric parameters; the registry
// the run configuration refers to.

#include <string>
#include <vector>

#include "lmc/analytic.hpp"

namespace lmc::presets {

// harmonic_quadratic:   p1 (x^2 - y^2)/2
// isotropic_quadratic:  p1 (x^2 + y^2)/2
// isotropic_tilted:     p1 (x^2 + y^2)/2 + p2 x
// sin_bump:             (x^2 + y^2)/2 + p1 sin(x) sin(y)
// saddle_scaled:        p1 (x^2 - y^2)/2 + p2 x y
AnalyticPotential potential(const std::string& name, double p1, double p2);

std::vector<std::string> potential_names();

}  // namespace lmc::presets
