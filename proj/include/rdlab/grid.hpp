#pragma once

// Rectangular no-flux domains discretized at cell centers, and scalar
// fields living on them. Nodes along an axis of length L with N cells sit
// at x_j = (j + 1/2) L / N, so every node is interior and the discrete
// operators built in spectral.hpp satisfy the reflection (zero normal
// derivative) boundary condition exactly.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdlab {

struct GridAxis {
    double length = 1.0;
    int points = 0;
};

class Grid {
public:
    Grid() = default;

    explicit Grid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
        if (axes_.empty() || axes_.size() > 3)
            throw std::invalid_argument("Grid: dimension must be 1, 2 or 3");
        for (const auto& a : axes_) {
            if (a.points < 4)
                throw std::invalid_argument("Grid: need at least 4 points per axis");
            if (!(a.length > 0.0))
                throw std::invalid_argument("Grid: axis length must be positive");
        }
    }

    static Grid line(int n, double length = 1.0) {
        return Grid({GridAxis{length, n}});
    }
    static Grid box(int nx, int ny, double lx = 1.0, double ly = 1.0) {
        return Grid({GridAxis{lx, nx}, GridAxis{ly, ny}});
    }

    int dim() const { return static_cast<int>(axes_.size()); }
    const std::vector<GridAxis>& axes() const { return axes_; }
    int points(int axis) const { return axes_.at(axis).points; }
    double length(int axis) const { return axes_.at(axis).length; }
    double spacing(int axis) const {
        return axes_.at(axis).length / axes_.at(axis).points;
    }

    std::size_t node_count() const {
        std::size_t n = 1;
        for (const auto& a : axes_) n *= static_cast<std::size_t>(a.points);
        return n;
    }

    /// Volume of one cell (the midpoint-rule quadrature weight).
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < dim(); ++a) v *= spacing(a);
        return v;
    }

    /// Node coordinates along one axis: (j + 1/2) h.
    std::vector<double> node_coordinates(int axis) const {
        const double h = spacing(axis);
        std::vector<double> x(points(axis));
        for (int j = 0; j < points(axis); ++j) x[j] = (j + 0.5) * h;
        return x;
    }

    bool operator==(const Grid& o) const {
        if (axes_.size() != o.axes_.size()) return false;
        for (std::size_t a = 0; a < axes_.size(); ++a)
            if (axes_[a].points != o.axes_[a].points ||
                axes_[a].length != o.axes_[a].length)
                return false;
        return true;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    std::vector<GridAxis> axes_;
};

/// Scalar field sampled at the cell centers of a Grid. Values are stored
/// row-major with the last axis fastest.
class Field {
public:
    Field() = default;

    Field(Grid grid, double fill = 0.0)
        : grid_(std::move(grid)), values_(grid_.node_count(), fill) {}

    Field(Grid grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.node_count())
            throw std::invalid_argument("Field: value count does not match grid");
    }

    static Field constant(const Grid& g, double c) { return Field(g, c); }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    double min() const;
    double max() const;
    double max_abs() const;
    /// Spatial mean (equals integral / domain volume for the midpoint rule).
    double mean() const;
    /// Midpoint-rule integral over the domain.
    double integral() const { return mean() * domain_volume(); }
    double domain_volume() const {
        double v = 1.0;
        for (int a = 0; a < grid_.dim(); ++a) v *= grid_.length(a);
        return v;
    }
    bool all_finite() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);
    friend Field operator+(Field a, const Field& b) { a += b; return a; }
    friend Field operator-(Field a, const Field& b) { a -= b; return a; }
    friend Field operator*(double s, Field a) { a *= s; return a; }

    /// Evaluate fn at every node coordinate tuple; dim-generic.
    template <class Fn>
    static Field sample(const Grid& g, Fn&& fn) {
        Field f(g);
        const int d = g.dim();
        std::vector<std::vector<double>> coords(d);
        for (int a = 0; a < d; ++a) coords[a] = g.node_coordinates(a);
        std::vector<int> idx(d, 0);
        for (std::size_t i = 0; i < f.size(); ++i) {
            std::vector<double> x(d);
            for (int a = 0; a < d; ++a) x[a] = coords[a][idx[a]];
            f[i] = fn(std::span<const double>(x));
            for (int a = d - 1; a >= 0; --a) {
                if (++idx[a] < g.points(a)) break;
                idx[a] = 0;
            }
        }
        return f;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

void require_same_grid(const Field& a, const Field& b, const std::string& what);

/// c0 <= c1 <= c2 by construction: c1 adds the sup of first derivatives,
/// c2 additionally the sup of second derivatives.
struct NormTriple {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

} // namespace rdlab
