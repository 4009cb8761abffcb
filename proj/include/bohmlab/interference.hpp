#pragma once
// Analytic two-slit pattern and comparison against a simulated screen profile.
//
// The 1D model treats each slit as a normal-density image of width sigma
// centered at x1 and x2; the combined pattern is
//     P(x) = (rho1 + rho2)/2 + sqrt(rho1*rho2) cos(k x).
// The mapping from a 2D run's geometry (slit separation d, screen distance
// L, packet wave number k_packet) to the model wave number is the standard
// Fraunhofer relation k = k_packet d / L, i.e. fringe spacing lambda L / d.

#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "bohmlab/wavefield.hpp"

namespace bohmlab {

struct SlitModel {
    double x1 = -0.5;
    double x2 = 0.5;
    double sigma = 1.0;
    double k = 2.0 * std::numbers::pi;
};

// Density of slit image l (1 or 2) at position x.
double slit_density(const SlitModel& m, int l, double x);

// Interference pattern P(x) and the envelope midline (rho1 + rho2)/2.
double pattern(const SlitModel& m, double x);
double pattern_midline(const SlitModel& m, double x);

// Limiting densities for amplitudes e^(-S1), e^(-S2):
// upper = ((e^-S1 + e^-S2)/2)^2, lower = ((e^-S1 - e^-S2)/2)^2.
std::pair<double, double> superposition_limits(double S1, double S2);

struct PatternPoint {
    double x = 0.0;
    double P = 0.0;
    double midline = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
};

std::vector<PatternPoint> tabulate(const SlitModel& m, double xmin, double xmax, std::size_t n);

struct FraunhoferGeometry {
    double slit_separation = 0.0;  // d
    double screen_distance = 0.0;  // L, slit plane to screen line
    double packet_k = 0.0;         // incident wave number
    double screen_center = 0.0;    // expected pattern center on the screen
    double window_half = 0.0;      // measurement half-window; 0 = L/4
};

struct InterferenceReport {
    std::vector<double> screen_coord;  // sample positions along the screen
    std::vector<double> screen_rho;    // density along the screen
    std::vector<double> peaks;         // refined maxima inside the window
    double fringe_spacing = 0.0;       // median adjacent peak distance
    double predicted_spacing = 0.0;    // lambda L / d
    double spacing_error = 0.0;        // relative, when both spacings known
    double central_offset = 0.0;       // strongest peak vs screen_center
    double fitted_contrast = 0.0;      // oscillation amplitude over midline
    double fitted_phase = 0.0;
    SlitModel fitted;
    bool fit_ok = false;
};

// Extract the density profile along the screen line (the vertical line
// x = screen_x for 2D snapshots, the whole axis for 1D), locate fringe
// maxima, and compare spacing against the Fraunhofer prediction.
// Throws when the profile is degenerate (no detectable signal).
InterferenceReport compare_simulated(const WaveField& snapshot, double screen_x,
                                     const FraunhoferGeometry& geom);

}  // namespace bohmlab
