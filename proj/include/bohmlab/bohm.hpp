#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bohmlab/derivatives.hpp"
#include "bohmlab/potential.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

// Quantum potential evaluation routes.  `curvature` differentiates the
// amplitude R = sqrt(rho) spectrally; `entropy` assembles the same quantity
// from log-density derivatives.  Keeping both catches transform bugs that a
// single route would hide.
enum class QForm { curvature, entropy };

struct DecomposeOptions {
    double rho_floor_rel = 1e-12;   // mask: rho >= rho_floor_rel * max(rho)
    Deriv backend = Deriv::spectral;
    bool with_action = true;
    // reference for the action line integral; {-1,-1} picks the density peak
    std::array<std::ptrdiff_t, 2> action_ref{-1, -1};
};

struct ActionField {
    RealField J;
    std::vector<std::uint8_t> available;  // reachable from the reference through unmasked links
    double closure_defect = 0.0;          // max |path_xy - path_yx|
    bool multivalued = false;             // defect beyond half a winding quantum
};

// Hydrodynamic fields of one snapshot.  All gradients are evaluated from the
// amplitude (ratio formulas), never by differentiating the unbounded J, S_Q
// or v fields directly.
struct BohmFields {
    Grid grid;
    double time = 0.0, hbar = 1.0, mass = 1.0;
    RealField rho;
    RealField S_Q;                         // -0.5 ln(max(rho, floor))
    RealField Q;                           // curvature form
    std::array<RealField, 2> grad_J;
    std::array<RealField, 2> v;            // grad_J / mass
    std::array<RealField, 2> grad_rho;
    std::array<RealField, 2> grad_S_Q;
    RealField lap_S_Q;
    RealField div_v;
    ActionField action;
    bool has_action = false;
    std::vector<std::uint8_t> mask;        // 1 where rho above floor
    double rho_floor = 0.0;
};

std::array<RealField, 2> phase_gradient(const WaveField& f, const DecomposeOptions& opt = {});
RealField quantum_entropy(const WaveField& f, const DecomposeOptions& opt = {});
RealField quantum_potential(const WaveField& f, QForm form, const DecomposeOptions& opt = {});
ActionField action_field(const WaveField& f, std::array<std::ptrdiff_t, 2> ref = {-1, -1},
                         const DecomposeOptions& opt = {});
BohmFields decompose(const WaveField& f, const DecomposeOptions& opt = {});

struct ReconstructReport {
    WaveField field;
    bool multivalued = false;  // action had a nonzero closure defect; phase is sector-dependent
};
ReconstructReport reconstruct(const BohmFields& b);

struct ResidualOptions {
    Deriv backend = Deriv::spectral;
    double mask_floor_rel = 1e-6;     // residuals are only meaningful well above the density floor
    QForm q_form = QForm::curvature;  // used by the phase-equation residual
};

struct ResidualReport {
    RealField field;
    std::vector<std::uint8_t> mask;
    double rms = 0.0;      // over masked points
    double max_abs = 0.0;  // over masked points
    double time = 0.0;
};

// Pointwise defect of the phase equation
//   -dJ/dt = (grad J)^2 / 2m + U + Q
// at snapshot `index`, time derivatives by centered differences of the
// bracketing snapshots.
ResidualReport hj_residual(const std::vector<WaveField>& snaps, const Potential& pot,
                           std::size_t index, const ResidualOptions& opt = {});

// Pointwise defect of d(rho)/dt + div(rho v) = 0, expanded as
// rho_dot + rho div v + v . grad rho so the entropy form below is its exact
// algebraic transform.
ResidualReport continuity_residual(const std::vector<WaveField>& snaps, std::size_t index,
                                   const ResidualOptions& opt = {});

// Pointwise defect of dS_Q/dt = -v . grad S_Q + div(v)/2.
ResidualReport entropy_balance_residual(const std::vector<WaveField>& snaps, std::size_t index,
                                        const ResidualOptions& opt = {});

}  // namespace bohmlab
