#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace bohmlab {

// Uniform tensor grid in 1 or 2 dimensions.  Periodic convention: the last
// sample along each axis duplicates the first (x_max is the wrap image of
// x_min), so spectral operations act on the leading points-1 samples with
// period x_max - x_min.  spacing = (max - min) / (points - 1).
struct Grid {
    int dims = 1;
    std::array<std::size_t, 2> points{0, 1};   // samples per axis (axis 1 unused in 1D)
    std::array<double, 2> min{0.0, 0.0};
    std::array<double, 2> max{0.0, 0.0};
    std::array<double, 2> spacing{0.0, 0.0};

    std::size_t size() const { return points[0] * (dims == 2 ? points[1] : 1); }
    double coord(int axis, std::size_t i) const { return min[axis] + spacing[axis] * static_cast<double>(i); }
    double span(int axis) const { return max[axis] - min[axis]; }

    // Row-major, x outermost.
    std::size_t index(std::size_t ix, std::size_t iy = 0) const {
        return dims == 2 ? ix * points[1] + iy : ix;
    }

    // Trapezoid weights; with the duplicated endpoint these reproduce the
    // periodic Riemann sum exactly for periodic integrands.
    double quad_weight(int axis, std::size_t i) const {
        return (i == 0 || i + 1 == points[axis]) ? 0.5 * spacing[axis] : spacing[axis];
    }

    bool contains(double x, double y = 0.0) const {
        if (x < min[0] || x > max[0]) return false;
        if (dims == 2 && (y < min[1] || y > max[1])) return false;
        return true;
    }
};

// Validates extents and sizes; throws std::invalid_argument on bad input.
Grid make_grid(int dims,
               std::array<double, 2> min,
               std::array<double, 2> max,
               std::array<std::size_t, 2> points,
               std::size_t total_cap = (std::size_t{1} << 22));

std::vector<double> axis_coords(const Grid& g, int axis);

}  // namespace bohmlab
