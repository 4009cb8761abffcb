#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "bohmlab/bohm.hpp"
#include "bohmlab/constants.hpp"
#include "bohmlab/potential.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

// J + i*hbar*S_Q per point, with the amplitude-consistency defect
// max | e^(-S_Q) - sqrt(rho) | over the masked region.
struct ComplexActionReport {
    ComplexField field;
    std::vector<std::uint8_t> mask;  // decomposition mask AND action availability
    double modulus_defect = 0.0;
};
ComplexActionReport complex_action(const BohmFields& b);

// Rebuild the wavefunction as exp(i*calJ/hbar) on the masked region.
WaveField field_from_action(const BohmFields& b, const ComplexField& calJ);

// Max pointwise defect of the complex-square expansion
//   (grad J + i hbar grad S_Q)^2 = (grad J)^2 - hbar^2 (grad S_Q)^2
//                                  + 2 i hbar grad J . grad S_Q
// together with the scale max|LHS| it should be compared against.
struct GradientSquareReport {
    double max_defect = 0.0;
    double scale = 0.0;
};
GradientSquareReport gradient_square_identity(const BohmFields& b);

struct ComplexResidualOptions {
    Deriv backend = Deriv::spectral;          // wavefunction derivatives
    Deriv potential_backend = Deriv::central2;  // sampled-U derivatives (U is not box-periodic)
    double mask_floor_rel = 1e-6;
};

// Complexified phase-equation residual.  The potential-derivative terms of
// the underlying expansion are replaced by their wavefunction-side
// identifications (-div v / 2 and lap S_Q), which makes the real part equal
// the phase-equation residual and the imaginary part equal -hbar times the
// entropy-balance residual, by construction.  The literal potential-side
// terms are evaluated with `probe_direction` and reported alongside for
// comparison; they are diagnostics, not part of the residual.
struct ComplexResidualReport {
    ComplexField field;
    std::vector<std::uint8_t> mask;
    double re_rms = 0.0, im_rms = 0.0;
    double re_max = 0.0, im_max = 0.0;
    RealField literal_b1;  // (s/2m) n.grad U, the term the construction replaces by -div v/2
    RealField literal_b2;  // -(s^2/2m) lap U, the term replaced by lap S_Q
    double time = 0.0;
};
ComplexResidualReport complexified_hj_residual(const std::vector<WaveField>& snaps,
                                               const Potential& pot, std::size_t index,
                                               std::optional<std::array<double, 2>> probe_direction,
                                               const PhysicalConstants& pc = {},
                                               const ComplexResidualOptions& opt = {});

// Both sides of a proclaimed identification, exported for inspection.
struct ProbeReport {
    RealField lhs, rhs;
    std::vector<std::uint8_t> mask;
    double max_discrepancy = 0.0;
    double correlation = 0.0;  // Pearson over the mask; 0 when degenerate
};
// lhs = (s/2m) n.grad U with n along grad U;  rhs = -div v / 2
ProbeReport taylor_probe_b1(const BohmFields& b, const Potential& pot,
                            const PhysicalConstants& pc = {}, Deriv pot_backend = Deriv::central2);
// lhs = -(s^2/2m) lap U;  rhs = lap S_Q
ProbeReport taylor_probe_b2(const BohmFields& b, const Potential& pot,
                            const PhysicalConstants& pc = {}, Deriv pot_backend = Deriv::central2);

// Closed axis-aligned rectangle of grid points, corners inclusive.
struct GridLoop {
    std::size_t ix0 = 0, iy0 = 0, ix1 = 0, iy1 = 0;
};
struct CirculationResult {
    double gamma = 0.0;    // loop integral of grad J
    double winding = 0.0;  // gamma / (2 pi hbar)
};
CirculationResult circulation(const WaveField& f, const GridLoop& loop,
                              const DecomposeOptions& opt = {});

// grad S_Q and the direction-rate field (2/s) grad S_Q it implies, with
// magnitudes; purely diagnostic.
struct DirectionRateReport {
    std::array<RealField, 2> grad_S_Q;
    std::array<RealField, 2> n_dot;
    RealField n_dot_magnitude;
    std::vector<std::uint8_t> mask;
    double time = 0.0;
};
DirectionRateReport epsilon_dot_check(const std::vector<WaveField>& snaps,
                                      const PhysicalConstants& pc, std::size_t index,
                                      const DecomposeOptions& opt = {});

}  // namespace bohmlab
