#include "bohmlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bohmlab {

namespace {

// 0 for u <= 0, 1 for u >= 1, half-cosine in between.
double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return 0.5 * (1.0 - std::cos(std::numbers::pi * u));
}

// Smoothed indicator of [a, b] with ramps of width w outside-in.
double smoothbox(double x, double a, double b, double w) {
    return smoothstep((x - a) / w + 1.0) * smoothstep((b - x) / w + 1.0);
}

}  // namespace

Potential make_free(const Grid& g) {
    return Potential{g, RealField(g.size(), 0.0), "free"};
}

Potential make_harmonic(const Grid& g, double omega, double mass, std::array<double, 2> center) {
    if (!(omega > 0.0) || !(mass > 0.0))
        throw std::invalid_argument("make_harmonic: omega and mass must be positive");
    Potential p{g, RealField(g.size()), "harmonic"};
    double k = 0.5 * mass * omega * omega;
    for (std::size_t i = 0; i < g.points[0]; ++i) {
        double dx = g.coord(0, i) - center[0];
        for (std::size_t j = 0; j < g.points[1]; ++j) {
            double dy = g.dims == 2 ? g.coord(1, j) - center[1] : 0.0;
            p.values[g.index(i, j)] = k * (dx * dx + dy * dy);
        }
    }
    return p;
}

Potential make_two_slit(const Grid& g, const TwoSlitSpec& s) {
    if (g.dims != 2) throw std::invalid_argument("make_two_slit: needs a 2D grid");
    if (!(s.thickness > 0.0) || !(s.slit_width > 0.0) || !(s.height > 0.0))
        throw std::invalid_argument("make_two_slit: thickness, slit_width, height must be positive");
    double xa = s.wall_x - 0.5 * s.thickness, xb = s.wall_x + 0.5 * s.thickness;
    if (xa < g.min[0] || xb > g.max[0])
        throw std::invalid_argument("make_two_slit: barrier strip leaves the grid x-range");
    std::array<double, 2> lo, hi;
    for (int l = 0; l < 2; ++l) {
        lo[l] = s.slit_centers[l] - 0.5 * s.slit_width;
        hi[l] = s.slit_centers[l] + 0.5 * s.slit_width;
        if (lo[l] < g.min[1] || hi[l] > g.max[1])
            throw std::invalid_argument("make_two_slit: slit " + std::to_string(l) + " leaves the grid y-range");
    }
    int first = s.slit_centers[0] <= s.slit_centers[1] ? 0 : 1;
    if (hi[first] > lo[1 - first])
        throw std::invalid_argument("make_two_slit: slits overlap");

    double wx = s.ramp_cells * g.spacing[0];
    double wy = s.ramp_cells * g.spacing[1];
    Potential p{g, RealField(g.size()), "two_slit"};
    for (std::size_t i = 0; i < g.points[0]; ++i) {
        double strip = smoothbox(g.coord(0, i), xa, xb, wx);
        if (strip == 0.0) continue;
        for (std::size_t j = 0; j < g.points[1]; ++j) {
            double y = g.coord(1, j);
            double open0 = smoothbox(y, lo[0], hi[0], wy);
            double open1 = smoothbox(y, lo[1], hi[1], wy);
            double open = std::max(open0, open1);
            p.values[g.index(i, j)] = s.height * strip * (1.0 - open);
        }
    }
    return p;
}

Potential make_custom(const Grid& g, RealField values, std::string label) {
    if (values.size() != g.size()) throw std::invalid_argument("make_custom: sample count does not match grid");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("make_custom: potential samples must be finite");
    return Potential{g, std::move(values), std::move(label)};
}

Potential build_potential(const Grid& g, const PotentialSpec& spec) {
    if (spec.kind == "free") return make_free(g);
    if (spec.kind == "harmonic") return make_harmonic(g, spec.omega, spec.mass, spec.center);
    if (spec.kind == "two_slit") return make_two_slit(g, spec.two_slit);
    if (spec.kind == "custom") return make_custom(g, spec.custom_values);
    throw std::invalid_argument("build_potential: unknown kind '" + spec.kind + "'");
}

}  // namespace bohmlab
