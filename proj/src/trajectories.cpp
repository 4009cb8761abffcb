#include "bohmlab/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "bohmlab/util.hpp"

namespace bohmlab {

namespace {

// Inverse of the piecewise-quadratic CDF a trapezoid-rule density implies:
// solves rho0*t + (rho1-rho0)/(2h)*t^2 = u_rem in rationalized form, which
// stays stable as the cell slope vanishes.
double invert_cell(double u_rem, double rho0, double rho1, double h) {
    double a = 0.5 * (rho1 - rho0) / h;
    double disc = std::max(0.0, rho0 * rho0 + 4.0 * a * u_rem);
    double denom = rho0 + std::sqrt(disc);
    if (!(denom > 0.0)) return 0.0;
    return std::clamp(2.0 * u_rem / denom, 0.0, h);
}

}  // namespace

std::vector<std::array<double, 2>> sample_initial(const WaveField& f, std::size_t count,
                                                  std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample_initial: count must be at least 1");
    const Grid& g = f.grid;
    RealField rho = density(f);
    double rmax = 0.0;
    for (double r : rho) rmax = std::max(rmax, r);
    if (!(rmax > 0.0)) throw std::invalid_argument("sample_initial: degenerate density");

    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return u64_to_unit(rng()); };
    std::vector<std::array<double, 2>> out(count, {0.0, 0.0});

    if (g.dims == 1) {
        std::size_t n = g.points[0];
        std::vector<double> cdf(n, 0.0);
        for (std::size_t i = 1; i < n; ++i)
            cdf[i] = cdf[i - 1] + 0.5 * (rho[i - 1] + rho[i]) * g.spacing[0];
        double total = cdf[n - 1];
        if (!(total > 0.0)) throw std::invalid_argument("sample_initial: degenerate density");
        for (auto& p : out) {
            double u = unit() * total;
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            std::size_t cell = it == cdf.begin() ? 0 : static_cast<std::size_t>(it - cdf.begin()) - 1;
            if (cell >= n - 1) cell = n - 2;
            double t = invert_cell(u - cdf[cell], rho[cell], rho[cell + 1], g.spacing[0]);
            p[0] = g.coord(0, cell) + t;
        }
        return out;
    }

    // 2D: rejection with the flat envelope rmax
    auto rho_bilinear = [&](double x, double y) {
        double fx = (x - g.min[0]) / g.spacing[0];
        double fy = (y - g.min[1]) / g.spacing[1];
        std::size_t ix = std::min(static_cast<std::size_t>(fx), g.points[0] - 2);
        std::size_t iy = std::min(static_cast<std::size_t>(fy), g.points[1] - 2);
        double ax = fx - static_cast<double>(ix), ay = fy - static_cast<double>(iy);
        return (1 - ax) * (1 - ay) * rho[g.index(ix, iy)] + ax * (1 - ay) * rho[g.index(ix + 1, iy)] +
               (1 - ax) * ay * rho[g.index(ix, iy + 1)] + ax * ay * rho[g.index(ix + 1, iy + 1)];
    };
    for (auto& p : out) {
        for (;;) {
            double x = g.min[0] + unit() * g.span(0);
            double y = g.min[1] + unit() * g.span(1);
            if (unit() * rmax <= rho_bilinear(x, y)) {
                p = {x, y};
                break;
            }
        }
    }
    return out;
}

VelocitySeries::VelocitySeries(const std::vector<WaveField>& snaps, const DecomposeOptions& opt) {
    if (snaps.size() < 2) throw std::invalid_argument("VelocitySeries: need at least 2 snapshots");
    grid_ = snaps[0].grid;
    dims_ = grid_.dims;
    slices_.reserve(snaps.size());
    for (const auto& f : snaps) {
        if (f.grid.dims != grid_.dims || f.grid.points != grid_.points)
            throw std::invalid_argument("VelocitySeries: snapshot grids differ");
        Slice s;
        s.time = f.time;
        if (!slices_.empty() && !(s.time > slices_.back().time))
            throw std::invalid_argument("VelocitySeries: snapshot times not increasing");
        RealField rho = density(f);
        double rmax = 0.0;
        for (double r : rho) rmax = std::max(rmax, r);
        double floor = opt.rho_floor_rel * rmax;
        s.mask.assign(rho.size(), 0);
        for (std::size_t i = 0; i < rho.size(); ++i) s.mask[i] = rho[i] >= floor;
        auto gj = phase_gradient(f, opt);
        for (int a = 0; a < dims_; ++a) {
            s.v[a] = std::move(gj[a]);
            for (auto& val : s.v[a]) val /= f.mass;
        }
        slices_.push_back(std::move(s));
    }
}

std::optional<std::array<double, 2>> VelocitySeries::eval(const Slice& s, double x, double y) const {
    if (!grid_.contains(x, y)) return std::nullopt;
    double fx = (x - grid_.min[0]) / grid_.spacing[0];
    std::size_t ix = std::min(static_cast<std::size_t>(fx), grid_.points[0] - 2);
    double ax = fx - static_cast<double>(ix);
    if (dims_ == 1) {
        std::size_t i0 = grid_.index(ix), i1 = grid_.index(ix + 1);
        if (!s.mask[i0] || !s.mask[i1]) return std::nullopt;
        return std::array<double, 2>{(1 - ax) * s.v[0][i0] + ax * s.v[0][i1], 0.0};
    }
    double fy = (y - grid_.min[1]) / grid_.spacing[1];
    std::size_t iy = std::min(static_cast<std::size_t>(fy), grid_.points[1] - 2);
    double ay = fy - static_cast<double>(iy);
    std::size_t c00 = grid_.index(ix, iy), c10 = grid_.index(ix + 1, iy);
    std::size_t c01 = grid_.index(ix, iy + 1), c11 = grid_.index(ix + 1, iy + 1);
    if (!s.mask[c00] || !s.mask[c10] || !s.mask[c01] || !s.mask[c11]) return std::nullopt;
    std::array<double, 2> v{0.0, 0.0};
    for (int a = 0; a < 2; ++a)
        v[a] = (1 - ax) * (1 - ay) * s.v[a][c00] + ax * (1 - ay) * s.v[a][c10] +
               (1 - ax) * ay * s.v[a][c01] + ax * ay * s.v[a][c11];
    return v;
}

std::optional<std::array<double, 2>> VelocitySeries::at(std::array<double, 2> pos, double t) const {
    if (t < t_begin() - 1e-12 || t > t_end() + 1e-12)
        throw std::invalid_argument("VelocitySeries: time outside the snapshot span");
    auto it = std::lower_bound(slices_.begin() + 1, slices_.end(), t,
                               [](const Slice& s, double tv) { return s.time < tv; });
    std::size_t hi = it == slices_.end() ? slices_.size() - 1
                                         : static_cast<std::size_t>(it - slices_.begin());
    const Slice& a = slices_[hi - 1];
    const Slice& b = slices_[hi];
    double w = (t - a.time) / (b.time - a.time);
    w = std::clamp(w, 0.0, 1.0);
    auto va = eval(a, pos[0], pos[1]);
    auto vb = eval(b, pos[0], pos[1]);
    if (!va || !vb) return std::nullopt;
    return std::array<double, 2>{(1 - w) * (*va)[0] + w * (*vb)[0],
                                 (1 - w) * (*va)[1] + w * (*vb)[1]};
}

double VelocitySeries::max_speed(std::size_t slice) const {
    const Slice& s = slices_.at(slice);
    double m2 = 0.0;
    for (std::size_t i = 0; i < s.mask.size(); ++i) {
        if (!s.mask[i]) continue;
        double v2 = s.v[0][i] * s.v[0][i];
        if (dims_ == 2) v2 += s.v[1][i] * s.v[1][i];
        m2 = std::max(m2, v2);
    }
    return std::sqrt(m2);
}

std::optional<std::array<double, 2>> velocity_at(const std::vector<WaveField>& snaps,
                                                 std::array<double, 2> pos, double t) {
    VelocitySeries series(snaps);
    return series.at(pos, t);
}

TrajectoryEnsemble integrate(const std::vector<WaveField>& snaps,
                             const std::vector<std::array<double, 2>>& initial,
                             std::uint64_t seed) {
    if (initial.empty()) throw std::invalid_argument("integrate: empty ensemble");
    VelocitySeries series(snaps);
    const Grid& g = series.grid();
    double hmin = g.spacing[0];
    if (g.dims == 2) hmin = std::min(hmin, g.spacing[1]);

    std::size_t nt = series.slices_.size(), np = initial.size();
    TrajectoryEnsemble ens;
    ens.dims = g.dims;
    ens.seed = seed;
    ens.times.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) ens.times[t] = series.slices_[t].time;
    ens.positions.assign(nt, initial);
    ens.flags.assign(np, ParticleFlag::ok);

    // substep counts per snapshot interval, shared by all particles
    std::vector<int> substeps(nt - 1, 1);
    for (std::size_t t = 0; t + 1 < nt; ++t) {
        double vmax = std::max(series.max_speed(t), series.max_speed(t + 1));
        double dt_snap = ens.times[t + 1] - ens.times[t];
        int n = vmax > 0.0 ? static_cast<int>(std::ceil(dt_snap / (0.25 * hmin / vmax))) : 1;
        substeps[t] = std::clamp(n, 1, 64);
    }

    parallel_for(np, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            std::array<double, 2> x = initial[p];
            ParticleFlag flag = ParticleFlag::ok;
            if (!g.contains(x[0], x[1])) flag = ParticleFlag::exited;
            ens.positions[0][p] = x;
            for (std::size_t t = 0; t + 1 < nt; ++t) {
                if (flag == ParticleFlag::ok) {
                    double t0 = ens.times[t];
                    double hstep = (ens.times[t + 1] - t0) / substeps[t];
                    for (int k = 0; k < substeps[t] && flag == ParticleFlag::ok; ++k) {
                        double tk = t0 + k * hstep;
                        auto k1 = series.at(x, tk);
                        if (!k1) { flag = ParticleFlag::frozen; break; }
                        auto x2 = std::array<double, 2>{x[0] + 0.5 * hstep * (*k1)[0],
                                                       x[1] + 0.5 * hstep * (*k1)[1]};
                        auto k2 = series.at(x2, tk + 0.5 * hstep);
                        if (!k2) { flag = ParticleFlag::frozen; break; }
                        auto x3 = std::array<double, 2>{x[0] + 0.5 * hstep * (*k2)[0],
                                                       x[1] + 0.5 * hstep * (*k2)[1]};
                        auto k3 = series.at(x3, tk + 0.5 * hstep);
                        if (!k3) { flag = ParticleFlag::frozen; break; }
                        auto x4 = std::array<double, 2>{x[0] + hstep * (*k3)[0],
                                                       x[1] + hstep * (*k3)[1]};
                        auto k4 = series.at(x4, tk + hstep);
                        if (!k4) { flag = ParticleFlag::frozen; break; }
                        x[0] += hstep / 6.0 * ((*k1)[0] + 2.0 * (*k2)[0] + 2.0 * (*k3)[0] + (*k4)[0]);
                        x[1] += hstep / 6.0 * ((*k1)[1] + 2.0 * (*k2)[1] + 2.0 * (*k3)[1] + (*k4)[1]);
                        if (!g.contains(x[0], x[1])) flag = ParticleFlag::exited;
                    }
                }
                ens.positions[t + 1][p] = x;
            }
            ens.flags[p] = flag;
        }
    });
    return ens;
}

CrossingReport crossing_check(const TrajectoryEnsemble& ens) {
    if (ens.dims != 1) throw std::invalid_argument("crossing_check: 1D ensembles only");
    if (ens.positions.empty()) return {};
    std::size_t np = ens.positions[0].size();
    std::vector<std::size_t> order(np);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ens.positions[0][a][0] < ens.positions[0][b][0];
    });
    CrossingReport rep;
    for (std::size_t t = 0; t < ens.positions.size(); ++t) {
        for (std::size_t k = 0; k + 1 < np; ++k) {
            double xl = ens.positions[t][order[k]][0];
            double xr = ens.positions[t][order[k + 1]][0];
            if (xr < xl) {
                ++rep.violations;
                if (rep.details.size() < 100) rep.details.push_back({t, order[k], order[k + 1]});
            }
        }
    }
    return rep;
}

}  // namespace bohmlab
