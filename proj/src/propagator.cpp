#include "bohmlab/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bohmlab/fft.hpp"
#include "bohmlab/util.hpp"

namespace bohmlab {

namespace {

constexpr Complex I{0.0, 1.0};

void validate(const LatticeSpec& spec) {
    if (spec.M < 1) throw std::invalid_argument("LatticeSpec: M must be at least 1");
    if (!(spec.delta_t > 0.0)) throw std::invalid_argument("LatticeSpec: delta_t must be positive");
    if (!(spec.theta >= 0.0 && spec.theta <= 0.2))
        throw std::invalid_argument("LatticeSpec: theta must lie in [0, 0.2]");
    if (!(spec.q_max > spec.q_min) || spec.q_points < 8)
        throw std::invalid_argument("LatticeSpec: quadrature grid needs q_max > q_min and >= 8 points");
}

Complex damped_dt(const LatticeSpec& spec) {
    return spec.delta_t * std::exp(Complex(0.0, -spec.theta));
}

void check_contained(const std::vector<Complex>& psi, const char* who) {
    double mx = 0.0;
    for (const Complex& z : psi) mx = std::max(mx, std::norm(z));
    if (!(mx > 0.0)) throw std::runtime_error(std::string(who) + ": slice state vanished");
    double edge = std::max(std::norm(psi.front()), std::norm(psi.back()));
    if (edge > 1e-12 * mx)
        throw std::runtime_error(std::string(who) +
                                 ": quadrature grid too small (boundary mass above 1e-6)");
}

struct Lattice {
    std::vector<double> y, w;          // quadrature points and trapezoid weights
    std::vector<Complex> chirp;        // kernel chirp by |i-j|, prefactor included
    std::vector<Complex> u_factor;     // endpoint potential phase per source point
    std::vector<Complex> khat;         // circulant spectrum of the chirp, length L >= 2n-1
    Complex dt_c;
    double h = 0.0;

    Lattice(const LatticeSpec& spec, const PropagatorSystem& sys) {
        dt_c = damped_dt(spec);
        std::size_t n = spec.q_points;
        h = (spec.q_max - spec.q_min) / static_cast<double>(n - 1);
        y.resize(n);
        w.assign(n, h);
        for (std::size_t j = 0; j < n; ++j) y[j] = spec.q_min + h * static_cast<double>(j);
        w.front() = w.back() = 0.5 * h;
        Complex pref = 1.0 / std::sqrt(2.0 * std::numbers::pi * I * sys.hbar * dt_c / sys.mass);
        Complex a = I * sys.mass / (2.0 * sys.hbar * dt_c);
        chirp.resize(n);
        for (std::size_t d = 0; d < n; ++d) {
            double dx = h * static_cast<double>(d);
            chirp[d] = pref * std::exp(a * dx * dx);
        }
        u_factor.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            u_factor[j] = std::exp(-I * sys.potential(y[j]) * dt_c / sys.hbar);
        std::size_t L = 1;
        while (L < 2 * n - 1) L <<= 1;
        khat.assign(L, Complex{});
        for (std::size_t d = 0; d < n; ++d) khat[d] = chirp[d];
        for (std::size_t d = 1; d < n; ++d) khat[L - d] = chirp[d];
        fft::forward_raw(khat);
    }

    // linear convolution against the symmetric chirp via the padded circulant
    std::vector<Complex> convolve(std::vector<Complex> tmp) const {
        std::size_t n = y.size(), L = khat.size();
        tmp.resize(L, Complex{});
        fft::forward_raw(tmp);
        for (std::size_t k = 0; k < L; ++k) tmp[k] *= khat[k];
        fft::backward_raw(tmp);
        tmp.resize(n);
        return tmp;
    }

    // state(next) = sum_j w_j K(next, j) state(j), endpoint potential rule
    std::vector<Complex> advance(const std::vector<Complex>& psi) const {
        std::size_t n = y.size();
        std::vector<Complex> tmp(n);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = w[j] * u_factor[j] * psi[j];
        return convolve(std::move(tmp));
    }

    // transposed application: state(prev) = sum_z w_z state(z) K(z, prev)
    std::vector<Complex> advance_transposed(const std::vector<Complex>& chi) const {
        std::size_t n = y.size();
        std::vector<Complex> tmp(n);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = w[j] * chi[j];
        std::vector<Complex> out = convolve(std::move(tmp));
        for (std::size_t i = 0; i < n; ++i) out[i] *= u_factor[i];
        return out;
    }
};

// general-sampling slice application for the midpoint option
std::vector<Complex> advance_midpoint(const std::vector<double>& y, const std::vector<double>& w,
                                      const std::vector<Complex>& psi, const PropagatorSystem& sys,
                                      Complex dt_c) {
    std::size_t n = y.size();
    // K(y_i, y_j) = chirp(|i-j|) * exp(-i U((y_i+y_j)/2) dt/hbar): the chirp
    // depends on the lag and the potential factor on i+j, so both tabulate
    double h = y[1] - y[0];
    Complex pref = 1.0 / std::sqrt(2.0 * std::numbers::pi * I * sys.hbar * dt_c / sys.mass);
    Complex a = I * sys.mass / (2.0 * sys.hbar * dt_c);
    std::vector<Complex> chirp(n);
    for (std::size_t d = 0; d < n; ++d) {
        double dx = h * static_cast<double>(d);
        chirp[d] = pref * std::exp(a * dx * dx);
    }
    std::vector<Complex> mid_factor(2 * n - 1);
    for (std::size_t s = 0; s < 2 * n - 1; ++s) {
        double xm = y[0] + 0.5 * h * static_cast<double>(s);
        mid_factor[s] = std::exp(-I * sys.potential(xm) * dt_c / sys.hbar);
    }
    std::vector<Complex> tmp(n);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = w[j] * psi[j];
    std::vector<Complex> out(n);
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                acc += chirp[i >= j ? i - j : j - i] * mid_factor[i + j] * tmp[j];
            out[i] = acc;
        }
    });
    return out;
}

}  // namespace

double PropagatorSystem::potential(double x) const {
    if (kind == "free") return 0.0;
    if (kind == "harmonic") return 0.5 * mass * omega * omega * x * x;
    if (kind == "custom") {
        if (!custom) throw std::invalid_argument("PropagatorSystem: custom potential not set");
        return custom(x);
    }
    throw std::invalid_argument("PropagatorSystem: unknown system kind '" + kind + "'");
}

Complex short_time_kernel(double x_next, double x_prev, const PropagatorSystem& sys,
                          Complex delta_t, bool midpoint) {
    if (!(delta_t.real() > 0.0))
        throw std::invalid_argument("short_time_kernel: slice duration must have positive real part");
    double dx = x_next - x_prev;
    double u = sys.potential(midpoint ? 0.5 * (x_next + x_prev) : x_prev);
    Complex pref = 1.0 / std::sqrt(2.0 * std::numbers::pi * I * sys.hbar * delta_t / sys.mass);
    Complex phase = (I / sys.hbar) * (sys.mass * dx * dx / (2.0 * delta_t) - u * delta_t);
    return pref * std::exp(phase);
}

Complex exact_kernel(const PropagatorSystem& sys, double x_end, double x_start, Complex T) {
    if (sys.kind == "free") {
        double dx = x_end - x_start;
        return std::sqrt(sys.mass / (2.0 * std::numbers::pi * I * sys.hbar * T)) *
               std::exp(I * sys.mass * dx * dx / (2.0 * sys.hbar * T));
    }
    if (sys.kind == "harmonic") {
        Complex wt = sys.omega * T;
        Complex s = std::sin(wt), c = std::cos(wt);
        if (std::abs(s) < 1e-12)
            throw std::domain_error("exact_kernel: harmonic caustic, sin(omega T) vanishes");
        Complex pref = std::sqrt(sys.mass * sys.omega / (2.0 * std::numbers::pi * I * sys.hbar * s));
        Complex arg = I * sys.mass * sys.omega *
                      ((x_start * x_start + x_end * x_end) * c - 2.0 * x_start * x_end) /
                      (2.0 * sys.hbar * s);
        return pref * std::exp(arg);
    }
    throw std::invalid_argument("exact_kernel: no oracle for system kind '" + sys.kind + "'");
}

std::vector<double> quadrature_points(const LatticeSpec& spec) {
    validate(spec);
    std::vector<double> y(spec.q_points);
    double h = (spec.q_max - spec.q_min) / static_cast<double>(spec.q_points - 1);
    for (std::size_t j = 0; j < spec.q_points; ++j)
        y[j] = spec.q_min + h * static_cast<double>(j);
    return y;
}

Complex lattice_propagator(const LatticeSpec& spec, const PropagatorSystem& sys, double x_start,
                           double x_end) {
    validate(spec);
    Complex dt_c = damped_dt(spec);
    if (spec.M == 1) return short_time_kernel(x_end, x_start, sys, dt_c, spec.midpoint);

    Lattice lat(spec, sys);
    std::size_t n = lat.y.size();
    std::vector<Complex> psi(n);
    for (std::size_t j = 0; j < n; ++j)
        psi[j] = short_time_kernel(lat.y[j], x_start, sys, dt_c, spec.midpoint);
    check_contained(psi, "lattice_propagator");
    for (std::size_t s = 2; s < spec.M; ++s) {
        psi = spec.midpoint ? advance_midpoint(lat.y, lat.w, psi, sys, dt_c) : lat.advance(psi);
        check_contained(psi, "lattice_propagator");
    }
    Complex g = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        g += lat.w[j] * short_time_kernel(x_end, lat.y[j], sys, dt_c, spec.midpoint) * psi[j];
    return g;
}

std::vector<Complex> apply_lattice(const LatticeSpec& spec, const PropagatorSystem& sys,
                                   const std::vector<Complex>& phi0) {
    validate(spec);
    if (phi0.size() != spec.q_points)
        throw std::invalid_argument("apply_lattice: state size does not match the quadrature grid");
    Lattice lat(spec, sys);
    Complex dt_c = lat.dt_c;
    std::vector<Complex> phi = phi0;
    check_contained(phi, "apply_lattice");
    for (std::size_t s = 0; s < spec.M; ++s) {
        phi = spec.midpoint ? advance_midpoint(lat.y, lat.w, phi, sys, dt_c) : lat.advance(phi);
        check_contained(phi, "apply_lattice");
    }
    return phi;
}

ConvergenceTable convergence_study(const PropagatorSystem& sys, const LatticeSpec& base,
                                   double x_start, double x_end, double T,
                                   const std::vector<std::size_t>& M_list) {
    if (!sys.has_oracle())
        throw std::invalid_argument("convergence_study: no exact kernel oracle for system kind '" +
                                    sys.kind + "'");
    if (M_list.empty()) throw std::invalid_argument("convergence_study: empty M list");
    for (std::size_t i = 1; i < M_list.size(); ++i)
        if (M_list[i] <= M_list[i - 1])
            throw std::invalid_argument("convergence_study: M list must be strictly increasing");
    if (!(T > 0.0)) throw std::invalid_argument("convergence_study: T must be positive");

    ConvergenceTable table;
    Complex t_eff = T * std::exp(Complex(0.0, -base.theta));
    Complex g_exact = exact_kernel(sys, x_end, x_start, t_eff);
    for (std::size_t m : M_list) {
        LatticeSpec spec = base;
        spec.M = m;
        spec.delta_t = T / static_cast<double>(m);
        Complex g = lattice_propagator(spec, sys, x_start, x_end);
        table.rows.push_back({m, std::abs(g - g_exact) / std::abs(g_exact)});
    }
    if (table.rows.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t cnt = 0;
        for (const auto& r : table.rows) {
            if (!(r.error > 0.0)) continue;
            double lx = std::log(T / static_cast<double>(r.M));
            double ly = std::log(r.error);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++cnt;
        }
        if (cnt >= 2) {
            double denom = cnt * sxx - sx * sx;
            if (std::abs(denom) > 0.0) {
                table.fitted_order = (cnt * sxy - sx * sy) / denom;
                table.has_order = true;
            }
        }
    }
    return table;
}

double semigroup_check(const LatticeSpec& spec, const PropagatorSystem& sys, double x_start,
                       double x_end, double t_mid) {
    validate(spec);
    double T = spec.delta_t * static_cast<double>(spec.M);
    if (!(t_mid > 0.0 && t_mid < T))
        throw std::invalid_argument("semigroup_check: t_mid must lie strictly inside (0, T)");
    auto m1 = static_cast<std::size_t>(std::llround(t_mid / spec.delta_t));
    m1 = std::clamp<std::size_t>(m1, 1, spec.M - 1);
    std::size_t m2 = spec.M - m1;

    Lattice lat(spec, sys);
    Complex dt_c = lat.dt_c;
    std::size_t n = lat.y.size();

    std::vector<Complex> fwd(n);
    for (std::size_t j = 0; j < n; ++j)
        fwd[j] = short_time_kernel(lat.y[j], x_start, sys, dt_c, spec.midpoint);
    for (std::size_t s = 2; s <= m1; ++s)
        fwd = spec.midpoint ? advance_midpoint(lat.y, lat.w, fwd, sys, dt_c) : lat.advance(fwd);

    std::vector<Complex> bwd(n);
    for (std::size_t j = 0; j < n; ++j)
        bwd[j] = short_time_kernel(x_end, lat.y[j], sys, dt_c, spec.midpoint);
    for (std::size_t s = 2; s <= m2; ++s) {
        if (spec.midpoint) {
            // transpose of the midpoint slice is the same kernel read backwards
            std::vector<Complex> next(n);
            for (std::size_t i = 0; i < n; ++i) {
                Complex acc = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    acc += lat.w[j] * bwd[j] * short_time_kernel(lat.y[j], lat.y[i], sys, dt_c, true);
                next[i] = acc;
            }
            bwd = std::move(next);
        } else {
            bwd = lat.advance_transposed(bwd);
        }
    }

    Complex composed = 0.0;
    for (std::size_t j = 0; j < n; ++j) composed += lat.w[j] * bwd[j] * fwd[j];
    Complex direct = lattice_propagator(spec, sys, x_start, x_end);
    double scale = std::abs(direct);
    return scale > 0.0 ? std::abs(composed - direct) / scale : std::abs(composed - direct);
}

}  // namespace bohmlab
