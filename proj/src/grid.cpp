#include "lmc/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "lmc/parallel.hpp"

namespace lmc {

Grid make_grid(Vec2 origin, Vec2 extent, int n) {
    if (n < 9) throw std::invalid_argument("make_grid: n must be >= 9, got " + std::to_string(n));
    if (n % 2 == 0) throw std::invalid_argument("make_grid: n must be odd, got " + std::to_string(n));
    if (!(extent.x > 0.0) || !(extent.y > 0.0))
        throw std::invalid_argument("make_grid: extent components must be positive");
    if (extent.x != extent.y)
        throw std::invalid_argument("make_grid: extent must be square (equal components)");
    Grid g;
    g.origin = origin;
    g.extent = extent;
    g.n = n;
    g.h = extent.x / static_cast<double>(n - 1);
    return g;
}

ScalarField sample(const Grid& g, const std::function<double(double, double)>& f) {
    ScalarField out(g);
    par::parallel_for(g.n, [&](std::int64_t j) {
        for (int i = 0; i < g.n; ++i)
            out(i, static_cast<int>(j)) = f(g.x(i), g.y(static_cast<int>(j)));
    });
    return out;
}

namespace {

struct Stencil1D {
    int lo;                    // leftmost offset
    std::array<double, 5> w;   // weights (unused tail = 0)
    int len;
};

// One-dimensional stencils, all 2nd-order accurate; weights are multiplied by
// 1/h^m after the weighted sum.
Stencil1D pick_stencil(int m, int i, int n) {
    switch (m) {
        case 1:
            if (i == 0) return {0, {-1.5, 2.0, -0.5, 0, 0}, 3};
            if (i == n - 1) return {-2, {0.5, -2.0, 1.5, 0, 0}, 3};
            return {-1, {-0.5, 0.0, 0.5, 0, 0}, 3};
        case 2:
            if (i == 0) return {0, {2.0, -5.0, 4.0, -1.0, 0}, 4};
            if (i == n - 1) return {-3, {-1.0, 4.0, -5.0, 2.0, 0}, 4};
            return {-1, {1.0, -2.0, 1.0, 0, 0}, 3};
        case 3:
            if (i == 0) return {0, {-2.5, 9.0, -12.0, 7.0, -1.5}, 5};
            if (i == 1) return {-1, {-1.5, 5.0, -6.0, 3.0, -0.5}, 5};
            if (i == n - 1) return {-4, {1.5, -7.0, 12.0, -9.0, 2.5}, 5};
            if (i == n - 2) return {-3, {0.5, -3.0, 6.0, -5.0, 1.5}, 5};
            return {-2, {-0.5, 1.0, 0.0, -1.0, 0.5}, 5};
        default:
            throw std::invalid_argument("diff: axis order must be in 1..3");
    }
}

void check_order(const ScalarField& f, int dx, int dy) {
    const int total = dx + dy;
    if (dx < 0 || dy < 0 || total < 1 || total > 3)
        throw std::invalid_argument("diff: |order| must be in 1..3");
    if (f.grid.n < 9) throw std::invalid_argument("diff: field grid too small");
}

template <bool Parallel>
ScalarField apply_axis_x(const ScalarField& f, int m) {
    const Grid& g = f.grid;
    ScalarField out(g);
    const double inv_hm = 1.0 / std::pow(g.h, m);
    auto row = [&](std::int64_t j64) {
        const int j = static_cast<int>(j64);
        for (int i = 0; i < g.n; ++i) {
            const Stencil1D s = pick_stencil(m, i, g.n);
            double acc = 0.0;
            for (int t = 0; t < s.len; ++t) acc += s.w[static_cast<std::size_t>(t)] * f(i + s.lo + t, j);
            out(i, j) = acc * inv_hm;
        }
    };
    if constexpr (Parallel)
        par::parallel_for(g.n, row);
    else
        par::serial_for(g.n, row);
    return out;
}

template <bool Parallel>
ScalarField apply_axis_y(const ScalarField& f, int m) {
    const Grid& g = f.grid;
    ScalarField out(g);
    const double inv_hm = 1.0 / std::pow(g.h, m);
    auto row = [&](std::int64_t j64) {
        const int j = static_cast<int>(j64);
        const Stencil1D s = pick_stencil(m, j, g.n);
        for (int i = 0; i < g.n; ++i) {
            double acc = 0.0;
            for (int t = 0; t < s.len; ++t) acc += s.w[static_cast<std::size_t>(t)] * f(i, j + s.lo + t);
            out(i, j) = acc * inv_hm;
        }
    };
    if constexpr (Parallel)
        par::parallel_for(g.n, row);
    else
        par::serial_for(g.n, row);
    return out;
}

template <bool Parallel>
ScalarField diff_impl(const ScalarField& f, int dx, int dy) {
    check_order(f, dx, dy);
    if (dx > 0 && dy > 0) {
        const ScalarField gx = apply_axis_x<Parallel>(f, dx);
        return apply_axis_y<Parallel>(gx, dy);
    }
    if (dx > 0) return apply_axis_x<Parallel>(f, dx);
    return apply_axis_y<Parallel>(f, dy);
}

}  // namespace

ScalarField diff(const ScalarField& f, int dx, int dy) { return diff_impl<true>(f, dx, dy); }

namespace serial {
ScalarField diff(const ScalarField& f, int dx, int dy) { return diff_impl<false>(f, dx, dy); }
}  // namespace serial

Region full_region(const Grid& g) {
    Region r;
    r.kind = Region::Kind::Rectangle;
    r.center = g.center();
    r.nodes.resize(static_cast<std::size_t>(g.size()));
    for (int k = 0; k < g.size(); ++k) r.nodes[static_cast<std::size_t>(k)] = k;
    return r;
}

Region ball_region(const Grid& g, Vec2 center, double radius) {
    if (radius < 0.0) throw std::invalid_argument("ball_region: negative radius");
    Region r;
    r.kind = Region::Kind::Disk;
    r.center = center;
    r.radius = radius;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            if (norm(g.node(i, j) - center) <= radius) r.nodes.push_back(g.index(i, j));
    if (r.nodes.empty()) throw std::invalid_argument("ball_region: ball does not intersect the grid");
    return r;
}

Region annulus_region(const Grid& g, Vec2 center, double r_in, double r_out) {
    if (r_in < 0.0 || r_out < r_in) throw std::invalid_argument("annulus_region: bad radii");
    Region r;
    r.kind = Region::Kind::Annulus;
    r.center = center;
    r.radius = r_out;
    r.inner = r_in;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double d = norm(g.node(i, j) - center);
            if (d >= r_in && d <= r_out) r.nodes.push_back(g.index(i, j));
        }
    if (r.nodes.empty()) throw std::invalid_argument("annulus_region: empty intersection");
    return r;
}

Region interior_region(const Grid& g, int margin_cells) {
    if (margin_cells < 0 || 2 * margin_cells >= g.n)
        throw std::invalid_argument("interior_region: margin leaves no nodes");
    Region r;
    r.kind = Region::Kind::Rectangle;
    for (int j = margin_cells; j < g.n - margin_cells; ++j)
        for (int i = margin_cells; i < g.n - margin_cells; ++i) r.nodes.push_back(g.index(i, j));
    return r;
}

Region with_margin(const Grid& g, const Region& r, int margin_cells) {
    Region out;
    out.kind = Region::Kind::Custom;
    out.center = r.center;
    out.radius = r.radius;
    out.inner = r.inner;
    for (int k : r.nodes) {
        const int i = k % g.n;
        const int j = k / g.n;
        if (i >= margin_cells && i < g.n - margin_cells && j >= margin_cells && j < g.n - margin_cells)
            out.nodes.push_back(k);
    }
    if (out.nodes.empty()) throw std::invalid_argument("with_margin: no nodes left");
    return out;
}

double integrate(const ScalarField& f, const Region& r) {
    if (r.empty()) throw std::invalid_argument("integrate: empty region");
    const double h2 = f.grid.h * f.grid.h;
    const auto& nodes = r.nodes;
    const double s = par::sum_over(static_cast<std::int64_t>(nodes.size()), [&](std::int64_t k) {
        return f[nodes[static_cast<std::size_t>(k)]];
    });
    return h2 * s;
}

double region_area(const Grid& g, const Region& r) {
    return g.h * g.h * static_cast<double>(r.count());
}

double field_max(const ScalarField& f, const Region& r) {
    return par::max_over(
        static_cast<std::int64_t>(r.nodes.size()),
        [&](std::int64_t k) { return f[r.nodes[static_cast<std::size_t>(k)]]; },
        -std::numeric_limits<double>::infinity());
}

double field_min(const ScalarField& f, const Region& r) {
    return par::min_over(
        static_cast<std::int64_t>(r.nodes.size()),
        [&](std::int64_t k) { return f[r.nodes[static_cast<std::size_t>(k)]]; },
        std::numeric_limits<double>::infinity());
}

int field_argmax(const ScalarField& f, const Region& r) {
    int best = 0;
    double bv = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
        const double v = f[r.nodes[k]];
        if (v > bv) {
            bv = v;
            best = static_cast<int>(k);
        }
    }
    return best;
}

int field_argmin(const ScalarField& f, const Region& r) {
    int best = 0;
    double bv = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
        const double v = f[r.nodes[k]];
        if (v < bv) {
            bv = v;
            best = static_cast<int>(k);
        }
    }
    return best;
}

}  // namespace lmc
