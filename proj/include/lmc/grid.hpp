#pragma once

// Uniform square grids on rectangles, scalar node fields, finite-difference
// stencils up to third order, rasterized disk/annulus regions, and node-sum
// quadrature.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// n nodes per axis (odd, >= 9), spacing h = extent/(n-1), square cells.
struct Grid {
    Vec2 origin{};
    Vec2 extent{};
    int n = 0;
    double h = 0.0;

    int size() const { return n * n; }
    int index(int i, int j) const { return j * n + i; }
    double x(int i) const { return origin.x + h * i; }
    double y(int j) const { return origin.y + h * j; }
    Vec2 node(int i, int j) const { return {x(i), y(j)}; }
    Vec2 center() const { return origin + 0.5 * extent; }
    bool same_layout(const Grid& o) const {
        return n == o.n && origin.x == o.origin.x && origin.y == o.origin.y &&
               extent.x == o.extent.x && extent.y == o.extent.y;
    }
};

Grid make_grid(Vec2 origin, Vec2 extent, int n);

struct ScalarField {
    Grid grid{};
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.size()), fill) {}

    double& operator()(int i, int j) { return values[static_cast<std::size_t>(grid.index(i, j))]; }
    double operator()(int i, int j) const { return values[static_cast<std::size_t>(grid.index(i, j))]; }
    double& operator[](int k) { return values[static_cast<std::size_t>(k)]; }
    double operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
    int n() const { return grid.n; }
};

// Evaluate f(x, y) at every node.
ScalarField sample(const Grid& g, const std::function<double(double, double)>& f);

// Finite differences of order (dx, dy), 1 <= dx+dy <= 3. Central stencils of
// matching order at interior nodes (2nd-order accurate), one-sided 2nd-order
// formulas within the stencil margin, mixed orders by composing 1-D passes.
ScalarField diff(const ScalarField& f, int dx, int dy);

namespace serial {
// Reference implementation with plain nested loops; bitwise-identical to the
// parallel path by construction. Kept for the consistency tests and benchmark.
ScalarField diff(const ScalarField& f, int dx, int dy);
}  // namespace serial

struct Region {
    enum class Kind { Rectangle, Disk, Annulus, Custom };
    Kind kind = Kind::Rectangle;
    Vec2 center{};
    double radius = 0.0;
    double inner = 0.0;
    std::vector<int> nodes;  // ascending grid indices

    bool empty() const { return nodes.empty(); }
    int count() const { return static_cast<int>(nodes.size()); }
};

Region full_region(const Grid& g);
// Nodes with |x - center| <= radius; throws if the intersection is empty.
Region ball_region(const Grid& g, Vec2 center, double radius);
Region annulus_region(const Grid& g, Vec2 center, double r_in, double r_out);
// Nodes at least `margin_cells` cells away from every edge.
Region interior_region(const Grid& g, int margin_cells);
// Nodes of `r` that are also >= margin_cells from the boundary.
Region with_margin(const Grid& g, const Region& r, int margin_cells);

// Node-sum quadrature h^2 * sum over region nodes; averages must divide by
// region_area (the discrete area h^2 * |region|), never the analytic one.
double integrate(const ScalarField& f, const Region& r);
double region_area(const Grid& g, const Region& r);

double field_max(const ScalarField& f, const Region& r);
double field_min(const ScalarField& f, const Region& r);
// index into r.nodes of the max/min (first in row-major order on ties)
int field_argmax(const ScalarField& f, const Region& r);
int field_argmin(const ScalarField& f, const Region& r);

}  // namespace lmc
