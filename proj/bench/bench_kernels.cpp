// Timing comparison of the OpenMP kernels against the serial reference paths:
// stencil application, residual assembly, Jacobi defect evaluation, and the
// deterministic reductions.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "lmc/estimates.hpp"
#include "lmc/grid.hpp"
#include "lmc/parallel.hpp"
#include "lmc/phase.hpp"
#include "lmc/solver.hpp"

using namespace lmc;

namespace {

double now() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now();
        f();
        best = std::min(best, now() - t0);
    }
    return best;
}

}  // namespace

int main() {
    const int n = 513;
    const Grid g = make_grid({-1.0, -1.0}, {2.0, 2.0}, n);
    const ScalarField f =
        sample(g, [](double x, double y) { return std::sin(3.0 * x) * std::cos(2.0 * y) + x * x; });

    std::printf("grid %dx%d (%d nodes), %s\n", n, n, g.size(),
#if defined(_OPENMP)
                "OpenMP enabled"
#else
                "OpenMP disabled"
#endif
    );
    std::printf("%-28s %12s %12s %8s\n", "kernel", "serial [ms]", "parallel [ms]", "speedup");

    auto report = [&](const char* name, double ts, double tp) {
        std::printf("%-28s %12.3f %12.3f %8.2fx\n", name, 1e3 * ts, 1e3 * tp, ts / tp);
    };

    {
        const double ts = time_best_of(5, [&] { (void)serial::diff(f, 1, 0); });
        const double tp = time_best_of(5, [&] { (void)diff(f, 1, 0); });
        report("diff d/dx", ts, tp);
    }
    {
        const double ts = time_best_of(5, [&] { (void)serial::diff(f, 2, 1); });
        const double tp = time_best_of(5, [&] { (void)diff(f, 2, 1); });
        report("diff d3/dx2dy", ts, tp);
    }
    {
        const double ts = time_best_of(5, [&] {
            par::SerialGuard guard;
            (void)par::sum_over(g.size(), [&](std::int64_t k) { return f[static_cast<int>(k)]; });
        });
        const double tp = time_best_of(
            5, [&] { (void)par::sum_over(g.size(), [&](std::int64_t k) { return f[static_cast<int>(k)]; }); });
        report("chunked sum reduction", ts, tp);
    }

    const PhaseField theta = build_phase_signed(g, {PhaseKind::SignChangingCubic, 0.0, 0.1, 0.0, 1.0, 0.5});
    const PotentialField u(f);
    {
        const double ts = time_best_of(3, [&] {
            par::SerialGuard guard;
            PotentialField v(f);
            (void)residual(v, theta);
        });
        const double tp = time_best_of(3, [&] {
            PotentialField v(f);
            (void)residual(v, theta);
        });
        report("residual assembly", ts, tp);
    }
    {
        const double ts = time_best_of(3, [&] {
            par::SerialGuard guard;
            PotentialField v(f);
            (void)jacobi_defect_field(v, theta);
        });
        const double tp = time_best_of(3, [&] {
            PotentialField v(f);
            (void)jacobi_defect_field(v, theta);
        });
        report("jacobi defect field", ts, tp);
    }
    return 0;
}
