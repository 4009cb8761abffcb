#include "bohmlab/evolve.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bohmlab/derivatives.hpp"
#include "bohmlab/fft.hpp"

namespace bohmlab {

Stepper::Stepper(const Grid& g, const Potential& pot, double dt, double hbar, double mass)
    : grid_(g), dt_(dt) {
    if (pot.values.size() != g.size())
        throw std::invalid_argument("Stepper: potential does not match grid");
    if (dt == 0.0 || !std::isfinite(dt)) throw std::invalid_argument("Stepper: dt must be nonzero and finite");
    if (!(hbar > 0.0) || !(mass > 0.0)) throw std::invalid_argument("Stepper: hbar and mass must be positive");

    std::size_t mx = g.points[0] - 1;
    std::size_t my = g.dims == 2 ? g.points[1] - 1 : 1;
    half_potential_.resize(mx * my);
    for (std::size_t i = 0; i < mx; ++i)
        for (std::size_t j = 0; j < my; ++j) {
            double th = -pot.values[g.index(i, j)] * dt / (2.0 * hbar);
            half_potential_[i * my + j] = Complex(std::cos(th), std::sin(th));
        }

    kinetic_.resize(mx * my);
    auto kx = fft::wavenumbers(g, 0);
    if (g.dims == 1) {
        for (std::size_t i = 0; i < mx; ++i) {
            double th = -hbar * kx[i] * kx[i] * dt / (2.0 * mass);
            kinetic_[i] = Complex(std::cos(th), std::sin(th));
        }
    } else {
        auto ky = fft::wavenumbers(g, 1);
        for (std::size_t i = 0; i < mx; ++i)
            for (std::size_t j = 0; j < my; ++j) {
                double th = -hbar * (kx[i] * kx[i] + ky[j] * ky[j]) * dt / (2.0 * mass);
                kinetic_[i * my + j] = Complex(std::cos(th), std::sin(th));
            }
    }
}

void Stepper::step(WaveField& f) const {
    ComplexField buf = fft::gather_interior(grid_, f.amp);
    std::size_t n = buf.size();
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) buf[i] *= half_potential_[i];
    });
    ComplexField hat;
    fft::forward(grid_, buf, hat);
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) hat[i] *= kinetic_[i];
    });
    fft::backward(grid_, hat, buf);
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) buf[i] *= half_potential_[i];
    });
    fft::scatter_interior(grid_, buf, f.amp);
    f.time += dt_;
}

WaveField step(const WaveField& f, const Potential& pot, double dt) {
    Stepper s(f.grid, pot, dt, f.hbar, f.mass);
    WaveField out = f;
    s.step(out);
    return out;
}

EvolveResult evolve(const WaveField& psi0, const Potential& pot, const EvolutionPlan& plan,
                    Warnings* warn) {
    if (!(plan.dt > 0.0)) throw std::invalid_argument("evolve: plan.dt must be positive");
    if (plan.steps < 1) throw std::invalid_argument("evolve: plan.steps must be at least 1");
    if (plan.snapshot_stride < 1) throw std::invalid_argument("evolve: snapshot_stride must be at least 1");
    if (psi0.amp.size() != psi0.grid.size()) throw std::invalid_argument("evolve: field size mismatch");

    if (warn) {
        // norm is preserved for any dt; the advisory flags steps too coarse to
        // resolve the fastest grid mode's phase
        double hmin = psi0.grid.spacing[0];
        if (psi0.grid.dims == 2) hmin = std::min(hmin, psi0.grid.spacing[1]);
        double dt_adv = hmin * hmin * psi0.mass / (psi0.hbar * std::numbers::pi);
        if (plan.dt > dt_adv)
            warn->add("evolve: dt " + std::to_string(plan.dt) + " exceeds the accuracy advisory " +
                      std::to_string(dt_adv));
    }

    Stepper stepper(psi0.grid, pot, plan.dt, psi0.hbar, psi0.mass);
    EvolveResult res;
    WaveField f = psi0;
    double t0 = psi0.time;
    double n0 = norm(f);
    res.snapshots.push_back(f);
    res.norm_per_snapshot.push_back(n0);
    for (long s = 1; s <= plan.steps; ++s) {
        stepper.step(f);
        f.time = t0 + plan.dt * static_cast<double>(s);  // avoid accumulated addition error
        if (s % plan.snapshot_stride == 0 || s == plan.steps) {
            double n = norm(f);
            res.snapshots.push_back(f);
            res.norm_per_snapshot.push_back(n);
            res.max_norm_drift = std::max(res.max_norm_drift, std::abs(n - n0));
        }
    }
    return res;
}

double energy(const WaveField& f, const Potential& pot) {
    if (pot.values.size() != f.amp.size()) throw std::invalid_argument("energy: potential grid mismatch");
    ComplexField lap = laplacian(f.grid, f.amp, Deriv::spectral);
    WaveField hpsi = f;
    double kfac = -f.hbar * f.hbar / (2.0 * f.mass);
    for (std::size_t i = 0; i < f.amp.size(); ++i)
        hpsi.amp[i] = kfac * lap[i] + pot.values[i] * f.amp[i];
    double n2 = inner_product(f, f).real();
    return inner_product(f, hpsi).real() / n2;
}

}  // namespace bohmlab
