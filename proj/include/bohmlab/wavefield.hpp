#pragma once

#include <array>
#include <complex>
#include <vector>

#include "bohmlab/grid.hpp"
#include "bohmlab/util.hpp"

namespace bohmlab {

using Complex = std::complex<double>;
using ComplexField = std::vector<Complex>;
using RealField = std::vector<double>;

// Complex amplitude sampled on a Grid, plus the evolution bookkeeping
// (time stamp, hbar, mass) every downstream operation needs.
struct WaveField {
    Grid grid;
    ComplexField amp;
    double time = 0.0;
    double hbar = 1.0;
    double mass = 1.0;
};

struct GaussianSpec {
    std::array<double, 2> center{0.0, 0.0};
    std::array<double, 2> sigma{1.0, 1.0};
    std::array<double, 2> k{0.0, 0.0};   // carrier wavevector
};

// Normalized Gaussian packet exp(-(x-c)^2/(4 sigma^2) + i k.x).  sigma is the
// position-space standard deviation of |psi|^2.  Warns if the tails are
// clipped by the box (mass outside > 1e-9).
WaveField gaussian_packet(const Grid& g, const GaussianSpec& spec,
                          double hbar = 1.0, double mass = 1.0, Warnings* warn = nullptr);

// Plane wave exp(i k.x) normalized to unit total probability.  k is snapped
// to the nearest wavevector commensurate with the periodic box; warns when
// the snap moves it by more than 1e-12 relative.
WaveField plane_wave(const Grid& g, std::array<double, 2> k,
                     double hbar = 1.0, double mass = 1.0, Warnings* warn = nullptr);

// Ground state of the harmonic well with frequency omega centered at c.
WaveField harmonic_ground(const Grid& g, double omega, std::array<double, 2> center = {0.0, 0.0},
                          double hbar = 1.0, double mass = 1.0, Warnings* warn = nullptr);

// 2D packet with a unit-winding phase singularity at `center`:
// (x-cx) + i(y-cy) times a Gaussian envelope.  Normalized.
WaveField vortex_packet(const Grid& g, std::array<double, 2> center, double sigma,
                        double hbar = 1.0, double mass = 1.0, Warnings* warn = nullptr);

// Weighted pointwise sum, renormalized to unit norm.  Grids and time stamps
// must agree; an identically-zero combination is an error.
WaveField superpose(const std::vector<WaveField>& fields, const std::vector<Complex>& weights);
WaveField superpose(const WaveField& a, const WaveField& b, Complex c1, Complex c2);

double norm(const WaveField& f);  // sqrt(<psi|psi>), trapezoid rule
Complex inner_product(const WaveField& a, const WaveField& b);
double fidelity(const WaveField& a, const WaveField& b);  // |<a|b>|^2 / (<a|a><b|b>)
void normalize(WaveField& f);

RealField density(const WaveField& f);
double integrate(const Grid& g, const RealField& f);

}  // namespace bohmlab
