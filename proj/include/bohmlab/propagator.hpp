#pragma once
// Lattice path-integral propagator for 1D free and harmonic systems.
//
// Slice convention: M slices of duration delta_t with M*delta_t = T, M-1
// intermediate integration points, and overall prefactor
// (2 pi i hbar delta_t / m)^(-M/2), one factor of exponent -1/2 per slice.
// With this bookkeeping M=1 is a single short-time kernel and the free
// propagator composes exactly for every M (the Gaussian semigroup), which
// is what pins the convention.
//
// The damping angle theta rotates delta_t -> delta_t * exp(-i theta),
// equivalent to giving hbar a negative imaginary part. It turns the
// oscillatory slice kernels into decaying ones so the quadrature converges;
// exact-kernel comparisons analytically continue the oracle to the same
// rotated total time T * exp(-i theta).

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace bohmlab {

using Complex = std::complex<double>;

struct PropagatorSystem {
    std::string kind = "free";  // "free", "harmonic", "custom"
    double omega = 1.0;         // harmonic frequency
    double mass = 1.0;
    double hbar = 1.0;
    std::function<double(double)> custom;  // potential when kind == "custom"

    double potential(double x) const;
    bool has_oracle() const { return kind == "free" || kind == "harmonic"; }
};

struct LatticeSpec {
    std::size_t M = 16;       // time slices; M * delta_t = T
    double delta_t = 0.0625;  // slice duration
    double q_min = -40.0;     // quadrature window
    double q_max = 40.0;
    std::size_t q_points = 4097;
    double theta = 0.0;     // damping angle in [0, 0.2]
    bool midpoint = false;  // midpoint-rule potential sampling (default endpoint)
};

// One-slice amplitude (2 pi i hbar dt / m)^(-1/2) *
// exp{(i/hbar)[m (x_next-x_prev)^2 / (2 dt) - U dt]} with the potential
// sampled at x_prev (or the midpoint when requested). delta_t may carry the
// damping rotation; its real part must be positive.
Complex short_time_kernel(double x_next, double x_prev, const PropagatorSystem& sys,
                          Complex delta_t, bool midpoint = false);

// Exact kernels, analytically continued to complex total time:
// free      sqrt(m / 2 pi i hbar T) exp(i m (x_end-x_start)^2 / 2 hbar T)
// harmonic  Mehler kernel with sin/cos of omega T
// Throws for systems without an oracle, and at harmonic caustics.
Complex exact_kernel(const PropagatorSystem& sys, double x_end, double x_start, Complex T);

// M-fold lattice integral by iterated kernel application on the trapezoid
// quadrature grid. Throws when the evolving slice state carries relative
// weight above 1e-6 at the quadrature boundary (grid too small).
Complex lattice_propagator(const LatticeSpec& spec, const PropagatorSystem& sys, double x_start,
                           double x_end);

// Apply the M-slice lattice evolution to a state sampled on the quadrature
// grid; returns the evolved state on the same points.
std::vector<Complex> apply_lattice(const LatticeSpec& spec, const PropagatorSystem& sys,
                                   const std::vector<Complex>& phi0);

// Quadrature sample positions of a spec.
std::vector<double> quadrature_points(const LatticeSpec& spec);

struct ConvergenceRow {
    std::size_t M = 0;
    double error = 0.0;  // relative error against the exact kernel
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double fitted_order = 0.0;  // slope of log error vs log delta_t
    bool has_order = false;     // false for single-row tables
};

// Error versus the exact kernel for each M in the (strictly increasing)
// list, with delta_t = T / M and the base spec's grid and damping.
ConvergenceTable convergence_study(const PropagatorSystem& sys, const LatticeSpec& base,
                                   double x_start, double x_end, double T,
                                   const std::vector<std::size_t>& M_list);

// Chapman-Kolmogorov composition defect:
// |G(T) - integral G(T - t_mid) G(t_mid) dx_mid| / |G(T)|
// with t_mid rounded to a whole number of slices.
double semigroup_check(const LatticeSpec& spec, const PropagatorSystem& sys, double x_start,
                       double x_end, double t_mid);

}  // namespace bohmlab
