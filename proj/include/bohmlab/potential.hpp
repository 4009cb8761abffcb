#pragma once

#include <array>
#include <string>

#include "bohmlab/grid.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

// Static external potential sampled on the grid.
struct Potential {
    Grid grid;
    RealField values;
    std::string kind = "free";
};

struct TwoSlitSpec {
    double wall_x = 0.0;       // center of the barrier strip
    double thickness = 0.8;    // strip width along x
    double height = 400.0;     // barrier top
    std::array<double, 2> slit_centers{-1.0, 1.0};  // along y
    double slit_width = 0.6;
    double ramp_cells = 2.0;   // cosine ramp width, in grid cells
};

Potential make_free(const Grid& g);
Potential make_harmonic(const Grid& g, double omega, double mass = 1.0,
                        std::array<double, 2> center = {0.0, 0.0});
// Hard strip at wall_x with two transparent gaps; edges are cosine-ramped
// over ramp_cells cells so the spectral solver does not ring.
Potential make_two_slit(const Grid& g, const TwoSlitSpec& spec);
Potential make_custom(const Grid& g, RealField values, std::string label = "custom");

// Declarative form used by config files.
struct PotentialSpec {
    std::string kind = "free";  // free | harmonic | two_slit | custom
    double omega = 1.0;
    double mass = 1.0;
    std::array<double, 2> center{0.0, 0.0};
    TwoSlitSpec two_slit;
    RealField custom_values;
};

Potential build_potential(const Grid& g, const PotentialSpec& spec);

}  // namespace bohmlab
