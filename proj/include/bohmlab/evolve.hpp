#pragma once

#include <vector>

#include "bohmlab/potential.hpp"
#include "bohmlab/util.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

struct EvolutionPlan {
    double dt = 1e-3;
    long steps = 1000;
    long snapshot_stride = 100;  // snapshots at stride multiples; t0 and final always kept
};

// Strang-split spectral step: half potential phase, full kinetic phase in
// Fourier space, half potential phase.  Unitary to rounding; reversing the
// sign of dt inverts the step exactly because every phase table conjugates.
class Stepper {
  public:
    Stepper(const Grid& g, const Potential& pot, double dt, double hbar, double mass);
    void step(WaveField& f) const;  // advances f.time by dt
    double dt() const { return dt_; }

  private:
    Grid grid_;
    double dt_;
    ComplexField half_potential_;  // interior lattice
    ComplexField kinetic_;         // interior lattice, FFT order
};

struct EvolveResult {
    std::vector<WaveField> snapshots;
    std::vector<double> norm_per_snapshot;
    double max_norm_drift = 0.0;
};

EvolveResult evolve(const WaveField& psi0, const Potential& pot, const EvolutionPlan& plan,
                    Warnings* warn = nullptr);

WaveField step(const WaveField& f, const Potential& pot, double dt);

// <psi|H|psi> with spectral kinetic term, real part.
double energy(const WaveField& f, const Potential& pot);

}  // namespace bohmlab
