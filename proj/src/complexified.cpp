#include "bohmlab/complexified.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bohmlab/derivatives.hpp"

namespace bohmlab {

ComplexActionReport complex_action(const BohmFields& b) {
    if (!b.has_action) throw std::invalid_argument("complex_action: decomposition carries no action field");
    std::size_t n = b.grid.size();
    ComplexActionReport rep;
    rep.field.assign(n, Complex{0.0, 0.0});
    rep.mask.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!b.mask[i] || !b.action.available[i]) continue;
        rep.mask[i] = 1;
        rep.field[i] = Complex(b.action.J[i], b.hbar * b.S_Q[i]);
        double defect = std::abs(std::exp(-b.S_Q[i]) - std::sqrt(b.rho[i]));
        rep.modulus_defect = std::max(rep.modulus_defect, defect);
    }
    return rep;
}

WaveField field_from_action(const BohmFields& b, const ComplexField& calJ) {
    if (calJ.size() != b.grid.size()) throw std::invalid_argument("field_from_action: size mismatch");
    WaveField f;
    f.grid = b.grid;
    f.time = b.time;
    f.hbar = b.hbar;
    f.mass = b.mass;
    f.amp.assign(calJ.size(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < calJ.size(); ++i) {
        if (!b.mask[i]) continue;
        Complex z = Complex(0.0, 1.0) * calJ[i] / b.hbar;  // i(J + i hbar S)/hbar = iJ/hbar - S
        f.amp[i] = std::exp(z);
    }
    return f;
}

GradientSquareReport gradient_square_identity(const BohmFields& b) {
    GradientSquareReport rep;
    double hb = b.hbar;
    for (std::size_t i = 0; i < b.grid.size(); ++i) {
        if (!b.mask[i]) continue;
        Complex lhs{0.0, 0.0};
        double g2 = 0.0, s2 = 0.0, gs = 0.0;
        for (int a = 0; a < b.grid.dims; ++a) {
            Complex p(b.grad_J[a][i], hb * b.grad_S_Q[a][i]);
            lhs += p * p;
            g2 += b.grad_J[a][i] * b.grad_J[a][i];
            s2 += b.grad_S_Q[a][i] * b.grad_S_Q[a][i];
            gs += b.grad_J[a][i] * b.grad_S_Q[a][i];
        }
        Complex rhs(g2 - hb * hb * s2, 2.0 * hb * gs);
        rep.max_defect = std::max(rep.max_defect, std::abs(lhs - rhs));
        rep.scale = std::max(rep.scale, std::abs(lhs));
    }
    return rep;
}

namespace {

double pearson(const RealField& a, const RealField& b, const std::vector<std::uint8_t>& mask) {
    double ma = 0.0, mb = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (mask[i]) {
            ma += a[i];
            mb += b[i];
            ++n;
        }
    if (n < 2) return 0.0;
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (mask[i]) {
            saa += (a[i] - ma) * (a[i] - ma);
            sbb += (b[i] - mb) * (b[i] - mb);
            sab += (a[i] - ma) * (b[i] - mb);
        }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

struct PotentialDerivs {
    std::array<RealField, 2> grad;
    RealField lap;
};

PotentialDerivs potential_derivs(const Potential& pot, Deriv backend) {
    PotentialDerivs out;
    for (int a = 0; a < pot.grid.dims; ++a) out.grad[a] = gradient(pot.grid, pot.values, a, backend);
    out.lap = laplacian(pot.grid, pot.values, backend);
    return out;
}

}  // namespace

ComplexResidualReport complexified_hj_residual(const std::vector<WaveField>& snaps,
                                               const Potential& pot, std::size_t index,
                                               std::optional<std::array<double, 2>> probe_direction,
                                               const PhysicalConstants& pc,
                                               const ComplexResidualOptions& opt) {
    if (snaps.size() < 3 || index < 1 || index + 1 >= snaps.size())
        throw std::invalid_argument("complexified_hj_residual: index has no bracketing snapshots");
    const WaveField& f = snaps[index];
    if (pot.values.size() != f.amp.size())
        throw std::invalid_argument("complexified_hj_residual: potential grid mismatch");
    double dp = snaps[index + 1].time - snaps[index].time;
    double dm = snaps[index].time - snaps[index - 1].time;
    if (!(dp > 0.0) || !(dm > 0.0) || std::abs(dp - dm) > 1e-9 * std::max(dp, dm))
        throw std::invalid_argument("complexified_hj_residual: snapshot spacing not uniform");
    double dt2 = dp + dm;

    if (probe_direction) {
        double nn = std::hypot((*probe_direction)[0], f.grid.dims == 2 ? (*probe_direction)[1] : 0.0);
        if (!(nn > 0.0)) throw std::invalid_argument("complexified_hj_residual: probe direction is zero");
        (*probe_direction)[0] /= nn;
        (*probe_direction)[1] /= nn;
    }

    DecomposeOptions dopt;
    dopt.backend = opt.backend;
    BohmFields b = decompose(f, dopt);
    RealField rho_p = density(snaps[index + 1]), rho_m = density(snaps[index - 1]);
    PotentialDerivs pd = potential_derivs(pot, opt.potential_backend);

    double m = f.mass, hb = f.hbar;
    double s = slowness_constant(pc);
    double floor = opt.mask_floor_rel * (*std::max_element(b.rho.begin(), b.rho.end()));
    std::size_t n = f.amp.size();

    ComplexResidualReport rep;
    rep.time = f.time;
    rep.field.assign(n, Complex{0.0, 0.0});
    rep.mask.assign(n, 0);
    rep.literal_b1.assign(n, 0.0);
    rep.literal_b2.assign(n, 0.0);

    double sre = 0.0, sim = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (b.rho[i] < floor) continue;
        rep.mask[i] = 1;
        // complex action rate: Re from the phase, Im from the density
        Complex psidot = (snaps[index + 1].amp[i] - snaps[index - 1].amp[i]) / dt2;
        double jdot = hb * std::imag(psidot * std::conj(f.amp[i])) / b.rho[i];
        double rhodot = (rho_p[i] - rho_m[i]) / dt2;
        double sdot = -rhodot / (2.0 * b.rho[i]);
        Complex caldot(jdot, hb * sdot);
        Complex grad2{0.0, 0.0};
        for (int a = 0; a < f.grid.dims; ++a) {
            Complex p(b.grad_J[a][i], hb * b.grad_S_Q[a][i]);
            grad2 += p * p;
        }
        Complex r = -caldot - grad2 / (2.0 * m) - pot.values[i] +
                    Complex(0.0, hb * 0.5 * b.div_v[i]) -
                    (hb * hb / (2.0 * m)) * b.lap_S_Q[i];
        rep.field[i] = r;
        sre += r.real() * r.real();
        sim += r.imag() * r.imag();
        rep.re_max = std::max(rep.re_max, std::abs(r.real()));
        rep.im_max = std::max(rep.im_max, std::abs(r.imag()));
        ++cnt;

        double ndotgrad;
        if (probe_direction) {
            ndotgrad = (*probe_direction)[0] * pd.grad[0][i];
            if (f.grid.dims == 2) ndotgrad += (*probe_direction)[1] * pd.grad[1][i];
        } else {
            double g2 = pd.grad[0][i] * pd.grad[0][i];
            if (f.grid.dims == 2) g2 += pd.grad[1][i] * pd.grad[1][i];
            ndotgrad = std::sqrt(g2);  // n along grad U
        }
        rep.literal_b1[i] = (s / (2.0 * m)) * ndotgrad;
        rep.literal_b2[i] = -(s * s / (2.0 * m)) * pd.lap[i];
    }
    if (cnt) {
        rep.re_rms = std::sqrt(sre / static_cast<double>(cnt));
        rep.im_rms = std::sqrt(sim / static_cast<double>(cnt));
    }
    return rep;
}

ProbeReport taylor_probe_b1(const BohmFields& b, const Potential& pot,
                            const PhysicalConstants& pc, Deriv pot_backend) {
    if (pot.values.size() != b.grid.size()) throw std::invalid_argument("taylor_probe_b1: grid mismatch");
    PotentialDerivs pd = potential_derivs(pot, pot_backend);
    double s = slowness_constant(pc);
    std::size_t n = b.grid.size();
    ProbeReport rep;
    rep.lhs.assign(n, 0.0);
    rep.rhs.assign(n, 0.0);
    rep.mask.assign(b.mask.begin(), b.mask.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (!rep.mask[i]) continue;
        double g2 = pd.grad[0][i] * pd.grad[0][i];
        if (b.grid.dims == 2) g2 += pd.grad[1][i] * pd.grad[1][i];
        rep.lhs[i] = (s / (2.0 * b.mass)) * std::sqrt(g2);
        rep.rhs[i] = -0.5 * b.div_v[i];
        rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(rep.lhs[i] - rep.rhs[i]));
    }
    rep.correlation = pearson(rep.lhs, rep.rhs, rep.mask);
    return rep;
}

ProbeReport taylor_probe_b2(const BohmFields& b, const Potential& pot,
                            const PhysicalConstants& pc, Deriv pot_backend) {
    if (pot.values.size() != b.grid.size()) throw std::invalid_argument("taylor_probe_b2: grid mismatch");
    PotentialDerivs pd = potential_derivs(pot, pot_backend);
    double s = slowness_constant(pc);
    std::size_t n = b.grid.size();
    ProbeReport rep;
    rep.lhs.assign(n, 0.0);
    rep.rhs.assign(n, 0.0);
    rep.mask.assign(b.mask.begin(), b.mask.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (!rep.mask[i]) continue;
        rep.lhs[i] = -(s * s / (2.0 * b.mass)) * pd.lap[i];
        rep.rhs[i] = b.lap_S_Q[i];
        rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(rep.lhs[i] - rep.rhs[i]));
    }
    rep.correlation = pearson(rep.lhs, rep.rhs, rep.mask);
    return rep;
}

CirculationResult circulation(const WaveField& f, const GridLoop& loop, const DecomposeOptions& opt) {
    const Grid& g = f.grid;
    if (g.dims != 2) throw std::invalid_argument("circulation: needs a 2D grid");
    if (loop.ix1 <= loop.ix0 || loop.iy1 <= loop.iy0)
        throw std::invalid_argument("circulation: degenerate loop corners");
    if (loop.ix1 >= g.points[0] || loop.iy1 >= g.points[1])
        throw std::invalid_argument("circulation: loop leaves the grid");
    RealField rho = density(f);
    double rmax = 0.0;
    for (double r : rho) rmax = std::max(rmax, r);
    double floor = opt.rho_floor_rel * rmax;

    auto at = [&](std::size_t ix, std::size_t iy) { return g.index(ix, iy); };
    auto check = [&](std::size_t idx) {
        if (rho[idx] < floor) throw std::invalid_argument("circulation: loop touches a node region");
    };
    double gamma = 0.0;
    auto add_link = [&](std::size_t a, std::size_t bidx) {
        check(a);
        check(bidx);
        gamma += f.hbar * std::arg(f.amp[bidx] * std::conj(f.amp[a]));
    };
    for (std::size_t i = loop.ix0; i < loop.ix1; ++i) add_link(at(i, loop.iy0), at(i + 1, loop.iy0));
    for (std::size_t j = loop.iy0; j < loop.iy1; ++j) add_link(at(loop.ix1, j), at(loop.ix1, j + 1));
    for (std::size_t i = loop.ix1; i > loop.ix0; --i) add_link(at(i, loop.iy1), at(i - 1, loop.iy1));
    for (std::size_t j = loop.iy1; j > loop.iy0; --j) add_link(at(loop.ix0, j), at(loop.ix0, j - 1));

    CirculationResult res;
    res.gamma = gamma;
    res.winding = gamma / (2.0 * std::numbers::pi * f.hbar);
    return res;
}

DirectionRateReport epsilon_dot_check(const std::vector<WaveField>& snaps,
                                      const PhysicalConstants& pc, std::size_t index,
                                      const DecomposeOptions& opt) {
    if (snaps.size() < 3 || index < 1 || index + 1 >= snaps.size())
        throw std::invalid_argument("epsilon_dot_check: index must be interior to the snapshot series");
    DecomposeOptions dopt = opt;
    dopt.with_action = false;
    BohmFields b = decompose(snaps[index], dopt);
    double s = slowness_constant(pc);
    std::size_t n = b.grid.size();
    DirectionRateReport rep;
    rep.time = b.time;
    rep.mask.assign(b.mask.begin(), b.mask.end());
    rep.n_dot_magnitude.assign(n, 0.0);
    for (int a = 0; a < b.grid.dims; ++a) {
        rep.grad_S_Q[a] = b.grad_S_Q[a];
        rep.n_dot[a].assign(n, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!rep.mask[i]) continue;
        double m2 = 0.0;
        for (int a = 0; a < b.grid.dims; ++a) {
            rep.n_dot[a][i] = (2.0 / s) * b.grad_S_Q[a][i];
            m2 += rep.n_dot[a][i] * rep.n_dot[a][i];
        }
        rep.n_dot_magnitude[i] = std::sqrt(m2);
    }
    return rep;
}

}  // namespace bohmlab
