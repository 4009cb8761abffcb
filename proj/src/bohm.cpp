#include "bohmlab/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bohmlab {

namespace {

double rho_max_of(const RealField& rho) {
    double m = 0.0;
    for (double r : rho) m = std::max(m, r);
    if (!(m > 0.0)) throw std::invalid_argument("decompose: field has zero density everywhere");
    return m;
}

struct PsiDerivs {
    std::array<ComplexField, 2> d;
    ComplexField lap;
};

PsiDerivs psi_derivs(const WaveField& f, Deriv backend) {
    PsiDerivs out;
    for (int a = 0; a < f.grid.dims; ++a) out.d[a] = gradient(f.grid, f.amp, a, backend);
    out.lap = laplacian(f.grid, f.amp, backend);
    return out;
}

void check_pair_grid(const WaveField& a, const WaveField& b) {
    if (a.grid.dims != b.grid.dims || a.grid.points != b.grid.points ||
        a.hbar != b.hbar || a.mass != b.mass)
        throw std::invalid_argument("snapshot sequence mixes grids or particle parameters");
}

// Uniform snapshot spacing around `index`, needed by the centered time
// differences.
double snapshot_dt(const std::vector<WaveField>& snaps, std::size_t index) {
    if (snaps.size() < 3) throw std::invalid_argument("residual: need at least 3 snapshots");
    if (index < 1 || index + 1 >= snaps.size())
        throw std::invalid_argument("residual: index " + std::to_string(index) +
                                    " has no bracketing snapshots");
    check_pair_grid(snaps[index], snaps[index - 1]);
    check_pair_grid(snaps[index], snaps[index + 1]);
    double dp = snaps[index + 1].time - snaps[index].time;
    double dm = snaps[index].time - snaps[index - 1].time;
    if (!(dp > 0.0) || !(dm > 0.0)) throw std::invalid_argument("residual: snapshot times not increasing");
    if (std::abs(dp - dm) > 1e-9 * std::max(dp, dm))
        throw std::invalid_argument("residual: snapshot spacing not uniform around index");
    return 0.5 * (dp + dm);
}

void summarize(ResidualReport& rep) {
    double acc = 0.0, mx = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < rep.field.size(); ++i) {
        if (!rep.mask[i]) continue;
        acc += rep.field[i] * rep.field[i];
        mx = std::max(mx, std::abs(rep.field[i]));
        ++n;
    }
    rep.rms = n ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
    rep.max_abs = mx;
}

}  // namespace

std::array<RealField, 2> phase_gradient(const WaveField& f, const DecomposeOptions& opt) {
    RealField rho = density(f);
    double floor = opt.rho_floor_rel * rho_max_of(rho);
    PsiDerivs pd = psi_derivs(f, opt.backend);
    std::array<RealField, 2> gj;
    for (int a = 0; a < f.grid.dims; ++a) {
        gj[a].assign(f.amp.size(), 0.0);
        for (std::size_t i = 0; i < f.amp.size(); ++i)
            if (rho[i] >= floor)
                gj[a][i] = f.hbar * std::imag(std::conj(f.amp[i]) * pd.d[a][i]) / rho[i];
    }
    return gj;
}

RealField quantum_entropy(const WaveField& f, const DecomposeOptions& opt) {
    RealField rho = density(f);
    double floor = opt.rho_floor_rel * rho_max_of(rho);
    RealField s(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) s[i] = -0.5 * std::log(std::max(rho[i], floor));
    return s;
}

RealField quantum_potential(const WaveField& f, QForm form, const DecomposeOptions& opt) {
    RealField rho = density(f);
    double floor = opt.rho_floor_rel * rho_max_of(rho);
    double c = f.hbar * f.hbar / (2.0 * f.mass);
    RealField q(rho.size(), 0.0);
    if (form == QForm::curvature) {
        RealField R(rho.size());
        for (std::size_t i = 0; i < rho.size(); ++i) R[i] = std::sqrt(rho[i]);
        RealField lapR = laplacian(f.grid, R, opt.backend);
        for (std::size_t i = 0; i < rho.size(); ++i)
            if (rho[i] >= floor) q[i] = -c * lapR[i] / R[i];
        return q;
    }
    // entropy route: Q = c (lap S_Q - |grad S_Q|^2), derivatives of S_Q taken
    // through the amplitude product rule, never from the log field itself
    PsiDerivs pd = psi_derivs(f, opt.backend);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] < floor) continue;
        double lap_rho = 2.0 * std::real(std::conj(f.amp[i]) * pd.lap[i]);
        double grad2 = 0.0;
        for (int a = 0; a < f.grid.dims; ++a) {
            double gr = 2.0 * std::real(std::conj(f.amp[i]) * pd.d[a][i]);
            grad2 += gr * gr;
            lap_rho += 2.0 * std::norm(pd.d[a][i]);
        }
        double gs2 = grad2 / (4.0 * rho[i] * rho[i]);  // |grad S_Q|^2
        double lap_s = -lap_rho / (2.0 * rho[i]) + grad2 / (2.0 * rho[i] * rho[i]);
        q[i] = c * (lap_s - gs2);
    }
    return q;
}

ActionField action_field(const WaveField& f, std::array<std::ptrdiff_t, 2> ref,
                         const DecomposeOptions& opt) {
    const Grid& g = f.grid;
    RealField rho = density(f);
    double floor = opt.rho_floor_rel * rho_max_of(rho);
    std::size_t nx = g.points[0], ny = g.dims == 2 ? g.points[1] : 1;

    std::size_t rix, riy = 0;
    if (ref[0] < 0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < rho.size(); ++i)
            if (rho[i] > rho[best]) best = i;
        rix = g.dims == 2 ? best / g.points[1] : best;
        riy = g.dims == 2 ? best % g.points[1] : 0;
    } else {
        rix = static_cast<std::size_t>(ref[0]);
        riy = g.dims == 2 ? static_cast<std::size_t>(ref[1]) : 0;
        if (rix >= nx || riy >= ny) throw std::invalid_argument("action_field: reference index out of range");
    }
    if (rho[g.index(rix, riy)] < floor)
        throw std::invalid_argument("action_field: reference sits in a node region");

    auto masked = [&](std::size_t ix, std::size_t iy) { return rho[g.index(ix, iy)] >= floor; };
    // Wrapped phase increment across one grid link; this is the exact line
    // integral of grad J over the link as long as the phase advances by less
    // than pi per cell.
    auto link = [&](std::size_t a, std::size_t b) {
        return f.hbar * std::arg(f.amp[b] * std::conj(f.amp[a]));
    };

    const double nan = std::numeric_limits<double>::quiet_NaN();
    RealField JA(g.size(), nan), JB(g.size(), nan);
    double j0 = f.hbar * std::arg(f.amp[g.index(rix, riy)]);

    auto sweep_x = [&](RealField& J, std::size_t iy) {
        std::size_t base = g.index(rix, iy);
        if (std::isnan(J[base])) return;
        for (std::size_t i = rix + 1; i < nx && masked(i, iy); ++i)
            J[g.index(i, iy)] = J[g.index(i - 1, iy)] + link(g.index(i - 1, iy), g.index(i, iy));
        for (std::size_t i = rix; i-- > 0 && masked(i, iy);)
            J[g.index(i, iy)] = J[g.index(i + 1, iy)] - link(g.index(i, iy), g.index(i + 1, iy));
    };
    auto sweep_y = [&](RealField& J, std::size_t ix) {
        std::size_t base = g.index(ix, riy);
        if (std::isnan(J[base])) return;
        for (std::size_t j = riy + 1; j < ny && masked(ix, j); ++j)
            J[g.index(ix, j)] = J[g.index(ix, j - 1)] + link(g.index(ix, j - 1), g.index(ix, j));
        for (std::size_t j = riy; j-- > 0 && masked(ix, j);)
            J[g.index(ix, j)] = J[g.index(ix, j + 1)] - link(g.index(ix, j), g.index(ix, j + 1));
    };

    // row-then-column path
    JA[g.index(rix, riy)] = j0;
    sweep_x(JA, riy);
    if (g.dims == 2)
        for (std::size_t i = 0; i < nx; ++i) sweep_y(JA, i);
    // column-then-row path
    JB[g.index(rix, riy)] = j0;
    if (g.dims == 2) {
        sweep_y(JB, rix);
        for (std::size_t j = 0; j < ny; ++j) sweep_x(JB, j);
    } else {
        sweep_x(JB, riy);
    }

    ActionField out;
    out.J.assign(g.size(), 0.0);
    out.available.assign(g.size(), 0);
    double defect = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        bool a = !std::isnan(JA[i]), b = !std::isnan(JB[i]);
        if (a && b) defect = std::max(defect, std::abs(JA[i] - JB[i]));
        if (a || b) {
            out.J[i] = a ? JA[i] : JB[i];
            out.available[i] = 1;
        }
    }
    out.closure_defect = defect;
    out.multivalued = defect > std::numbers::pi * f.hbar;
    return out;
}

BohmFields decompose(const WaveField& f, const DecomposeOptions& opt) {
    if (f.amp.size() != f.grid.size()) throw std::invalid_argument("decompose: field size mismatch");
    BohmFields b;
    b.grid = f.grid;
    b.time = f.time;
    b.hbar = f.hbar;
    b.mass = f.mass;
    b.rho = density(f);
    double rmax = rho_max_of(b.rho);
    b.rho_floor = opt.rho_floor_rel * rmax;
    std::size_t n = b.rho.size();
    b.mask.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) b.mask[i] = b.rho[i] >= b.rho_floor;

    PsiDerivs pd = psi_derivs(f, opt.backend);
    double hb = f.hbar, m = f.mass;
    double c = hb * hb / (2.0 * m);

    b.S_Q.resize(n);
    for (std::size_t i = 0; i < n; ++i) b.S_Q[i] = -0.5 * std::log(std::max(b.rho[i], b.rho_floor));

    for (int a = 0; a < f.grid.dims; ++a) {
        b.grad_J[a].assign(n, 0.0);
        b.v[a].assign(n, 0.0);
        b.grad_rho[a].assign(n, 0.0);
        b.grad_S_Q[a].assign(n, 0.0);
    }
    b.lap_S_Q.assign(n, 0.0);
    b.div_v.assign(n, 0.0);
    b.Q.assign(n, 0.0);

    RealField R(n);
    for (std::size_t i = 0; i < n; ++i) R[i] = std::sqrt(b.rho[i]);
    RealField lapR = laplacian(f.grid, R, opt.backend);

    for (std::size_t i = 0; i < n; ++i) {
        double lap_rho = 2.0 * std::real(std::conj(f.amp[i]) * pd.lap[i]);
        double grad2 = 0.0;
        for (int a = 0; a < f.grid.dims; ++a) {
            double gr = 2.0 * std::real(std::conj(f.amp[i]) * pd.d[a][i]);
            b.grad_rho[a][i] = gr;
            grad2 += gr * gr;
            lap_rho += 2.0 * std::norm(pd.d[a][i]);
        }
        if (!b.mask[i]) continue;
        double inv_rho = 1.0 / b.rho[i];
        Complex inv_psi = std::conj(f.amp[i]) * inv_rho;
        Complex lp = pd.lap[i] * inv_psi;  // lap psi / psi
        Complex gsum{0.0, 0.0};
        for (int a = 0; a < f.grid.dims; ++a) {
            Complex da = pd.d[a][i] * inv_psi;
            gsum += da * da;
            b.grad_J[a][i] = hb * std::imag(std::conj(f.amp[i]) * pd.d[a][i]) * inv_rho;
            b.v[a][i] = b.grad_J[a][i] / m;
            b.grad_S_Q[a][i] = -b.grad_rho[a][i] * (0.5 * inv_rho);
        }
        b.div_v[i] = (hb / m) * std::imag(lp - gsum);
        b.lap_S_Q[i] = -lap_rho * (0.5 * inv_rho) + grad2 * (0.5 * inv_rho * inv_rho);
        b.Q[i] = -c * lapR[i] / R[i];
    }

    if (opt.with_action) {
        b.action = action_field(f, opt.action_ref, opt);
        b.has_action = true;
    }
    return b;
}

ReconstructReport reconstruct(const BohmFields& b) {
    if (!b.has_action) throw std::invalid_argument("reconstruct: decomposition carries no action field");
    ReconstructReport rep;
    rep.field.grid = b.grid;
    rep.field.time = b.time;
    rep.field.hbar = b.hbar;
    rep.field.mass = b.mass;
    rep.field.amp.assign(b.grid.size(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < b.grid.size(); ++i) {
        if (!b.mask[i] || !b.action.available[i]) continue;
        double amp = std::exp(-b.S_Q[i]);
        double ph = b.action.J[i] / b.hbar;
        rep.field.amp[i] = amp * Complex(std::cos(ph), std::sin(ph));
    }
    rep.multivalued = b.action.multivalued;
    return rep;
}

ResidualReport hj_residual(const std::vector<WaveField>& snaps, const Potential& pot,
                           std::size_t index, const ResidualOptions& opt) {
    double dt2 = 2.0 * snapshot_dt(snaps, index);
    const WaveField& f = snaps[index];
    if (pot.values.size() != f.amp.size()) throw std::invalid_argument("hj_residual: potential grid mismatch");

    DecomposeOptions dopt;
    dopt.backend = opt.backend;
    dopt.with_action = false;
    BohmFields b = decompose(f, dopt);

    double floor = opt.mask_floor_rel * (*std::max_element(b.rho.begin(), b.rho.end()));
    std::size_t n = f.amp.size();
    ResidualReport rep;
    rep.time = f.time;
    rep.field.assign(n, 0.0);
    rep.mask.assign(n, 0);
    double m = f.mass, hb = f.hbar;
    double c = hb * hb / (2.0 * m);
    for (std::size_t i = 0; i < n; ++i) {
        if (b.rho[i] < floor) continue;
        rep.mask[i] = 1;
        Complex psidot = (snaps[index + 1].amp[i] - snaps[index - 1].amp[i]) / dt2;
        double jdot = hb * std::imag(psidot * std::conj(f.amp[i])) / b.rho[i];
        double g2 = 0.0;
        for (int a = 0; a < f.grid.dims; ++a) g2 += b.grad_J[a][i] * b.grad_J[a][i];
        double q;
        if (opt.q_form == QForm::curvature) {
            q = b.Q[i];
        } else {
            double gs2 = 0.0;
            for (int a = 0; a < f.grid.dims; ++a) gs2 += b.grad_S_Q[a][i] * b.grad_S_Q[a][i];
            q = c * (b.lap_S_Q[i] - gs2);
        }
        rep.field[i] = jdot + g2 / (2.0 * m) + pot.values[i] + q;
    }
    summarize(rep);
    return rep;
}

ResidualReport continuity_residual(const std::vector<WaveField>& snaps, std::size_t index,
                                   const ResidualOptions& opt) {
    double dt2 = 2.0 * snapshot_dt(snaps, index);
    const WaveField& f = snaps[index];
    DecomposeOptions dopt;
    dopt.backend = opt.backend;
    dopt.with_action = false;
    BohmFields b = decompose(f, dopt);
    RealField rho_p = density(snaps[index + 1]), rho_m = density(snaps[index - 1]);

    double floor = opt.mask_floor_rel * (*std::max_element(b.rho.begin(), b.rho.end()));
    std::size_t n = f.amp.size();
    ResidualReport rep;
    rep.time = f.time;
    rep.field.assign(n, 0.0);
    rep.mask.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (b.rho[i] < floor) continue;
        rep.mask[i] = 1;
        double rhodot = (rho_p[i] - rho_m[i]) / dt2;
        double adv = 0.0;
        for (int a = 0; a < f.grid.dims; ++a) adv += b.v[a][i] * b.grad_rho[a][i];
        rep.field[i] = rhodot + b.rho[i] * b.div_v[i] + adv;
    }
    summarize(rep);
    return rep;
}

ResidualReport entropy_balance_residual(const std::vector<WaveField>& snaps, std::size_t index,
                                        const ResidualOptions& opt) {
    double dt2 = 2.0 * snapshot_dt(snaps, index);
    const WaveField& f = snaps[index];
    DecomposeOptions dopt;
    dopt.backend = opt.backend;
    dopt.with_action = false;
    BohmFields b = decompose(f, dopt);
    RealField rho_p = density(snaps[index + 1]), rho_m = density(snaps[index - 1]);

    double floor = opt.mask_floor_rel * (*std::max_element(b.rho.begin(), b.rho.end()));
    std::size_t n = f.amp.size();
    ResidualReport rep;
    rep.time = f.time;
    rep.field.assign(n, 0.0);
    rep.mask.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (b.rho[i] < floor) continue;
        rep.mask[i] = 1;
        double rhodot = (rho_p[i] - rho_m[i]) / dt2;
        double sdot = -rhodot / (2.0 * b.rho[i]);
        double adv = 0.0;
        for (int a = 0; a < f.grid.dims; ++a) adv += b.v[a][i] * b.grad_S_Q[a][i];
        rep.field[i] = sdot + adv - 0.5 * b.div_v[i];
    }
    summarize(rep);
    return rep;
}

}  // namespace bohmlab
