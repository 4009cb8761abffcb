#include "bohmlab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bohmlab {

Grid make_grid(int dims,
               std::array<double, 2> min,
               std::array<double, 2> max,
               std::array<std::size_t, 2> points,
               std::size_t total_cap) {
    if (dims != 1 && dims != 2)
        throw std::invalid_argument("grid dims must be 1 or 2, got " + std::to_string(dims));
    Grid g;
    g.dims = dims;
    g.min = min;
    g.max = max;
    g.points = points;
    if (dims == 1) {
        g.points[1] = 1;
        g.min[1] = g.max[1] = 0.0;
    }
    std::size_t total = 1;
    for (int a = 0; a < dims; ++a) {
        if (!(max[a] > min[a]) || !std::isfinite(min[a]) || !std::isfinite(max[a]))
            throw std::invalid_argument("grid axis " + std::to_string(a) + " needs max > min, got [" +
                                        std::to_string(min[a]) + ", " + std::to_string(max[a]) + "]");
        if (points[a] < 8)
            throw std::invalid_argument("grid axis " + std::to_string(a) + " needs at least 8 points, got " +
                                        std::to_string(points[a]));
        total *= points[a];
        g.spacing[a] = (max[a] - min[a]) / static_cast<double>(points[a] - 1);
    }
    if (total > total_cap)
        throw std::invalid_argument("grid has " + std::to_string(total) + " points, cap is " +
                                    std::to_string(total_cap));
    return g;
}

std::vector<double> axis_coords(const Grid& g, int axis) {
    std::vector<double> xs(g.points[axis]);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = g.coord(axis, i);
    return xs;
}

}  // namespace bohmlab
