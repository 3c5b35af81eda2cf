#include "lmc/analytic.hpp"

namespace lmc {

double diff5(const std::function<double(double)>& f, double x, double step) {
    const double h = step;
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace lmc
