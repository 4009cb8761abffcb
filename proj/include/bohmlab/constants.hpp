#pragma once

#include <numbers>

namespace bohmlab {

// CODATA 2018 SI values.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;       // J s
    double e_charge = 1.602176634e-19;   // C
    double eps0 = 8.8541878128e-12;      // F/m
    double c = 299792458.0;              // m/s
    double m_electron = 9.1093837015e-31;  // kg
    double m_proton = 1.67262192369e-27;   // kg
    double m_neutron = 1.67492749804e-27;  // kg
    double alpha = 7.2973525693e-3;        // fine structure
};

// Slowness constant s = 4 pi eps0 hbar / e^2, units s/m.  Its inverse is the
// speed c*alpha, so s*c*alpha = 1 up to the precision of the inputs.
inline double slowness_constant(const PhysicalConstants& pc = {}) {
    return 4.0 * std::numbers::pi * pc.eps0 * pc.hbar / (pc.e_charge * pc.e_charge);
}

// Length scale eps = hbar s / (2 m) attached to a mass m.
inline double epsilon_radius(double mass, const PhysicalConstants& pc = {}) {
    return pc.hbar * slowness_constant(pc) / (2.0 * mass);
}

}  // namespace bohmlab
