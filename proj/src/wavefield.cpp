#include "bohmlab/wavefield.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bohmlab {

namespace {

void check_same_grid(const Grid& a, const Grid& b, const char* what) {
    bool same = a.dims == b.dims && a.points == b.points;
    for (int ax = 0; same && ax < a.dims; ++ax)
        same = a.min[ax] == b.min[ax] && a.max[ax] == b.max[ax];
    if (!same) throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

}  // namespace

double integrate(const Grid& g, const RealField& f) {
    if (f.size() != g.size()) throw std::invalid_argument("integrate: field size does not match grid");
    double acc = 0.0;
    if (g.dims == 1) {
        for (std::size_t i = 0; i < g.points[0]; ++i) acc += g.quad_weight(0, i) * f[i];
    } else {
        for (std::size_t i = 0; i < g.points[0]; ++i) {
            double wx = g.quad_weight(0, i);
            double row = 0.0;
            for (std::size_t j = 0; j < g.points[1]; ++j) row += g.quad_weight(1, j) * f[g.index(i, j)];
            acc += wx * row;
        }
    }
    return acc;
}

double norm(const WaveField& f) {
    return std::sqrt(integrate(f.grid, density(f)));
}

RealField density(const WaveField& f) {
    RealField rho(f.amp.size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(f.amp[i]);
    return rho;
}

Complex inner_product(const WaveField& a, const WaveField& b) {
    check_same_grid(a.grid, b.grid, "inner_product");
    const Grid& g = a.grid;
    Complex acc{0.0, 0.0};
    if (g.dims == 1) {
        for (std::size_t i = 0; i < g.points[0]; ++i)
            acc += g.quad_weight(0, i) * std::conj(a.amp[i]) * b.amp[i];
    } else {
        for (std::size_t i = 0; i < g.points[0]; ++i) {
            double wx = g.quad_weight(0, i);
            Complex row{0.0, 0.0};
            for (std::size_t j = 0; j < g.points[1]; ++j) {
                std::size_t n = g.index(i, j);
                row += g.quad_weight(1, j) * std::conj(a.amp[n]) * b.amp[n];
            }
            acc += wx * row;
        }
    }
    return acc;
}

double fidelity(const WaveField& a, const WaveField& b) {
    double na = norm(a), nb = norm(b);
    if (na <= 0.0 || nb <= 0.0) throw std::invalid_argument("fidelity: zero-norm field");
    return std::norm(inner_product(a, b)) / (na * na * nb * nb);
}

void normalize(WaveField& f) {
    double n = norm(f);
    if (n <= 0.0) throw std::invalid_argument("normalize: zero-norm field");
    double s = 1.0 / n;
    for (auto& z : f.amp) z *= s;
}

namespace {

// Boundary-decay check shared by the packet builders: spectral stepping
// treats the box as periodic, so the state must be negligible at the edges.
void warn_boundary(const WaveField& f, Warnings* warn, const char* who) {
    if (!warn) return;
    const Grid& g = f.grid;
    double peak = 0.0;
    for (const auto& z : f.amp) peak = std::max(peak, std::abs(z));
    double edge = 0.0;
    for (std::size_t j = 0; j < g.points[1]; ++j) {
        edge = std::max(edge, std::abs(f.amp[g.index(0, j)]));
        edge = std::max(edge, std::abs(f.amp[g.index(g.points[0] - 1, j)]));
    }
    if (g.dims == 2)
        for (std::size_t i = 0; i < g.points[0]; ++i) {
            edge = std::max(edge, std::abs(f.amp[g.index(i, 0)]));
            edge = std::max(edge, std::abs(f.amp[g.index(i, g.points[1] - 1)]));
        }
    if (edge > 1e-12 * peak)
        warn->add(std::string(who) + ": amplitude at box edge is " + std::to_string(edge / peak) +
                  " of peak; periodic wrap-around will matter");
}

}  // namespace

WaveField gaussian_packet(const Grid& g, const GaussianSpec& spec,
                          double hbar, double mass, Warnings* warn) {
    for (int a = 0; a < g.dims; ++a)
        if (!(spec.sigma[a] > 0.0))
            throw std::invalid_argument("gaussian_packet: sigma must be positive on axis " + std::to_string(a));
    if (warn)
        for (int a = 0; a < g.dims; ++a) {
            double margin = std::min(spec.center[a] - g.min[a], g.max[a] - spec.center[a]);
            if (margin < 4.0 * spec.sigma[a])
                warn->add("gaussian_packet: center is only " + std::to_string(margin / spec.sigma[a]) +
                          " sigma from the boundary on axis " + std::to_string(a));
        }
    WaveField f;
    f.grid = g;
    f.hbar = hbar;
    f.mass = mass;
    f.amp.resize(g.size());
    double lognorm = 0.0;
    for (int a = 0; a < g.dims; ++a)
        lognorm += -0.25 * std::log(2.0 * std::numbers::pi * spec.sigma[a] * spec.sigma[a]);
    double amp0 = std::exp(lognorm);
    for (std::size_t i = 0; i < g.points[0]; ++i) {
        double x = g.coord(0, i);
        for (std::size_t j = 0; j < g.points[1]; ++j) {
            double y = g.dims == 2 ? g.coord(1, j) : 0.0;
            double q = (x - spec.center[0]) * (x - spec.center[0]) / (4.0 * spec.sigma[0] * spec.sigma[0]);
            double ph = spec.k[0] * (x - spec.center[0]);
            if (g.dims == 2) {
                q += (y - spec.center[1]) * (y - spec.center[1]) / (4.0 * spec.sigma[1] * spec.sigma[1]);
                ph += spec.k[1] * (y - spec.center[1]);
            }
            f.amp[g.index(i, j)] = amp0 * std::exp(-q) * Complex(std::cos(ph), std::sin(ph));
        }
    }
    warn_boundary(f, warn, "gaussian_packet");
    normalize(f);
    return f;
}

WaveField plane_wave(const Grid& g, std::array<double, 2> k,
                     double hbar, double mass, Warnings* warn) {
    std::array<double, 2> ks{0.0, 0.0};
    for (int a = 0; a < g.dims; ++a) {
        double span = g.span(a);
        double m = std::round(k[a] * span / (2.0 * std::numbers::pi));
        ks[a] = 2.0 * std::numbers::pi * m / span;
        if (warn && std::abs(ks[a] - k[a]) > 1e-12 * std::max(1.0, std::abs(k[a])))
            warn->add("plane_wave: k on axis " + std::to_string(a) + " snapped from " +
                      std::to_string(k[a]) + " to " + std::to_string(ks[a]));
    }
    WaveField f;
    f.grid = g;
    f.hbar = hbar;
    f.mass = mass;
    f.amp.resize(g.size());
    double vol = g.span(0) * (g.dims == 2 ? g.span(1) : 1.0);
    double amp0 = 1.0 / std::sqrt(vol);
    for (std::size_t i = 0; i < g.points[0]; ++i) {
        double x = g.coord(0, i);
        for (std::size_t j = 0; j < g.points[1]; ++j) {
            double ph = ks[0] * x + (g.dims == 2 ? ks[1] * g.coord(1, j) : 0.0);
            f.amp[g.index(i, j)] = amp0 * Complex(std::cos(ph), std::sin(ph));
        }
    }
    return f;
}

WaveField harmonic_ground(const Grid& g, double omega, std::array<double, 2> center,
                          double hbar, double mass, Warnings* warn) {
    if (!(omega > 0.0)) throw std::invalid_argument("harmonic_ground: omega must be positive");
    GaussianSpec spec;
    spec.center = center;
    double sig = std::sqrt(hbar / (2.0 * mass * omega));
    spec.sigma = {sig, sig};
    return gaussian_packet(g, spec, hbar, mass, warn);
}

WaveField vortex_packet(const Grid& g, std::array<double, 2> center, double sigma,
                        double hbar, double mass, Warnings* warn) {
    if (g.dims != 2) throw std::invalid_argument("vortex_packet: needs a 2D grid");
    if (!(sigma > 0.0)) throw std::invalid_argument("vortex_packet: sigma must be positive");
    WaveField f;
    f.grid = g;
    f.hbar = hbar;
    f.mass = mass;
    f.amp.resize(g.size());
    for (std::size_t i = 0; i < g.points[0]; ++i) {
        double x = g.coord(0, i) - center[0];
        for (std::size_t j = 0; j < g.points[1]; ++j) {
            double y = g.coord(1, j) - center[1];
            double env = std::exp(-(x * x + y * y) / (4.0 * sigma * sigma));
            f.amp[g.index(i, j)] = Complex(x, y) * env;
        }
    }
    normalize(f);
    warn_boundary(f, warn, "vortex_packet");
    return f;
}

WaveField superpose(const std::vector<WaveField>& fields, const std::vector<Complex>& weights) {
    if (fields.empty() || fields.size() != weights.size())
        throw std::invalid_argument("superpose: need one weight per field");
    const WaveField& a = fields[0];
    for (std::size_t n = 1; n < fields.size(); ++n) {
        check_same_grid(a.grid, fields[n].grid, "superpose");
        if (a.hbar != fields[n].hbar || a.mass != fields[n].mass)
            throw std::invalid_argument("superpose: hbar/mass mismatch");
        if (a.time != fields[n].time)
            throw std::invalid_argument("superpose: time stamps differ");
    }
    WaveField f;
    f.grid = a.grid;
    f.hbar = a.hbar;
    f.mass = a.mass;
    f.time = a.time;
    f.amp.assign(a.amp.size(), Complex{0.0, 0.0});
    for (std::size_t n = 0; n < fields.size(); ++n)
        for (std::size_t i = 0; i < f.amp.size(); ++i) f.amp[i] += weights[n] * fields[n].amp[i];
    if (norm(f) <= 0.0) throw std::invalid_argument("superpose: weighted sum vanishes");
    normalize(f);
    return f;
}

WaveField superpose(const WaveField& a, const WaveField& b, Complex c1, Complex c2) {
    return superpose(std::vector<WaveField>{a, b}, std::vector<Complex>{c1, c2});
}

}  // namespace bohmlab
