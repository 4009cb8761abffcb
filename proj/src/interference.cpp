#include "bohmlab/interference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bohmlab {

namespace {

void validate(const SlitModel& m) {
    if (!(m.sigma > 0.0)) throw std::invalid_argument("SlitModel: sigma must be positive");
    if (!(m.k > 0.0)) throw std::invalid_argument("SlitModel: k must be positive");
    if (m.x1 == m.x2) throw std::invalid_argument("SlitModel: slit centers coincide");
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double slit_density(const SlitModel& m, int l, double x) {
    validate(m);
    if (l != 1 && l != 2) throw std::invalid_argument("slit_density: slit index must be 1 or 2");
    double c = l == 1 ? m.x1 : m.x2;
    double z = (x - c) / m.sigma;
    return std::exp(-0.5 * z * z) / (m.sigma * std::sqrt(2.0 * std::numbers::pi));
}

double pattern(const SlitModel& m, double x) {
    double r1 = slit_density(m, 1, x);
    double r2 = slit_density(m, 2, x);
    return 0.5 * (r1 + r2) + std::sqrt(r1 * r2) * std::cos(m.k * x);
}

double pattern_midline(const SlitModel& m, double x) {
    return 0.5 * (slit_density(m, 1, x) + slit_density(m, 2, x));
}

std::pair<double, double> superposition_limits(double S1, double S2) {
    double a1 = std::exp(-S1), a2 = std::exp(-S2);
    double upper = 0.25 * (a1 + a2) * (a1 + a2);
    double lower = 0.25 * (a1 - a2) * (a1 - a2);
    return {upper, lower};
}

std::vector<PatternPoint> tabulate(const SlitModel& m, double xmin, double xmax, std::size_t n) {
    validate(m);
    if (n < 2 || !(xmax > xmin)) throw std::invalid_argument("tabulate: need xmax > xmin and n >= 2");
    std::vector<PatternPoint> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = xmin + (xmax - xmin) * static_cast<double>(i) / static_cast<double>(n - 1);
        PatternPoint& p = out[i];
        p.x = x;
        p.rho1 = slit_density(m, 1, x);
        p.rho2 = slit_density(m, 2, x);
        p.midline = 0.5 * (p.rho1 + p.rho2);
        p.P = p.midline + std::sqrt(p.rho1 * p.rho2) * std::cos(m.k * x);
    }
    return out;
}

InterferenceReport compare_simulated(const WaveField& snapshot, double screen_x,
                                     const FraunhoferGeometry& geom) {
    const Grid& g = snapshot.grid;
    InterferenceReport rep;

    if (g.dims == 1) {
        rep.screen_coord.resize(g.points[0]);
        rep.screen_rho.resize(g.points[0]);
        for (std::size_t i = 0; i < g.points[0]; ++i) {
            rep.screen_coord[i] = g.coord(0, i);
            rep.screen_rho[i] = std::norm(snapshot.amp[i]);
        }
    } else {
        if (screen_x < g.min[0] || screen_x > g.max[0])
            throw std::invalid_argument("compare_simulated: screen line outside the grid");
        double fx = (screen_x - g.min[0]) / g.spacing[0];
        std::size_t ix = std::min(static_cast<std::size_t>(fx), g.points[0] - 2);
        double ax = fx - static_cast<double>(ix);
        rep.screen_coord.resize(g.points[1]);
        rep.screen_rho.resize(g.points[1]);
        for (std::size_t iy = 0; iy < g.points[1]; ++iy) {
            rep.screen_coord[iy] = g.coord(1, iy);
            rep.screen_rho[iy] = (1 - ax) * std::norm(snapshot.amp[g.index(ix, iy)]) +
                                 ax * std::norm(snapshot.amp[g.index(ix + 1, iy)]);
        }
    }

    std::size_t n = rep.screen_rho.size();
    double pmax = 0.0;
    for (double r : rep.screen_rho) pmax = std::max(pmax, r);
    if (!(pmax > 0.0))
        throw std::runtime_error("compare_simulated: no detectable fringes on the screen line");

    double window = geom.window_half > 0.0 ? geom.window_half
                    : geom.screen_distance > 0.0
                        ? 0.25 * geom.screen_distance
                        : 0.5 * (rep.screen_coord.back() - rep.screen_coord.front());
    auto in_window = [&](double y) { return std::abs(y - geom.screen_center) <= window; };

    // local maxima above 5% of the profile peak, parabolically refined
    double dy = rep.screen_coord[1] - rep.screen_coord[0];
    std::vector<std::pair<double, double>> found;  // (position, height)
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double v = rep.screen_rho[i];
        if (v <= rep.screen_rho[i - 1] || v < rep.screen_rho[i + 1]) continue;
        if (v < 0.05 * pmax) continue;
        double denom = rep.screen_rho[i - 1] - 2.0 * v + rep.screen_rho[i + 1];
        double shift = denom < 0.0 ? 0.5 * (rep.screen_rho[i - 1] - rep.screen_rho[i + 1]) / denom : 0.0;
        shift = std::clamp(shift, -0.5, 0.5);
        double pos = rep.screen_coord[i] + shift * dy;
        if (in_window(pos)) found.push_back({pos, v});
    }
    for (const auto& [pos, height] : found) rep.peaks.push_back(pos);

    if (found.size() >= 3) {
        std::vector<double> gaps;
        for (std::size_t i = 1; i < found.size(); ++i)
            gaps.push_back(found[i].first - found[i - 1].first);
        rep.fringe_spacing = median(gaps);
    }
    if (geom.slit_separation > 0.0 && geom.screen_distance > 0.0 && geom.packet_k > 0.0)
        rep.predicted_spacing =
            2.0 * std::numbers::pi * geom.screen_distance / (geom.packet_k * geom.slit_separation);
    if (rep.fringe_spacing > 0.0 && rep.predicted_spacing > 0.0)
        rep.spacing_error =
            std::abs(rep.fringe_spacing - rep.predicted_spacing) / rep.predicted_spacing;

    if (!found.empty()) {
        auto best = std::max_element(found.begin(), found.end(),
                                     [](auto& a, auto& b) { return a.second < b.second; });
        rep.central_offset = std::abs(best->first - geom.screen_center);
    }

    // Contrast fit: subtract a one-period boxcar midline, then project the
    // remainder onto cos/sin at the fringe wave number with the midline as
    // the oscillation envelope.
    double kfit = rep.fringe_spacing > 0.0      ? 2.0 * std::numbers::pi / rep.fringe_spacing
                  : rep.predicted_spacing > 0.0 ? 2.0 * std::numbers::pi / rep.predicted_spacing
                                                : 0.0;
    rep.fitted.k = kfit;
    if (kfit > 0.0) {
        long wbox = std::lround(2.0 * std::numbers::pi / (kfit * dy));
        wbox = std::clamp(wbox, 1L, static_cast<long>(n));
        std::vector<double> mid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            long lo = std::max(0L, static_cast<long>(i) - wbox / 2);
            long hi = std::min(static_cast<long>(n) - 1, static_cast<long>(i) + wbox / 2);
            double s = 0.0;
            for (long j = lo; j <= hi; ++j) s += rep.screen_rho[j];
            mid[i] = s / static_cast<double>(hi - lo + 1);
        }
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        double wsum = 0, csum = 0, c2sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double y = rep.screen_coord[i];
            if (!in_window(y)) continue;
            double m = mid[i];
            double u = y - geom.screen_center;
            double c = std::cos(kfit * u), s = std::sin(kfit * u);
            double o = rep.screen_rho[i] - m;
            a11 += c * c * m * m;
            a12 += c * s * m * m;
            a22 += s * s * m * m;
            b1 += o * c * m;
            b2 += o * s * m;
            wsum += m;
            csum += m * y;
            c2sum += m * y * y;
        }
        double det = a11 * a22 - a12 * a12;
        if (wsum > 0.0 && std::abs(det) > 1e-30 * (a11 + a22) * (a11 + a22)) {
            double a = (a22 * b1 - a12 * b2) / det;
            double b = (a11 * b2 - a12 * b1) / det;
            rep.fitted_contrast = std::hypot(a, b);
            rep.fitted_phase = std::atan2(b, a);
            double yc = csum / wsum;
            double var = std::max(0.0, c2sum / wsum - yc * yc);
            double sep = geom.slit_separation > 0.0 ? geom.slit_separation
                         : var > 0.0               ? std::sqrt(var)
                                                   : 1.0;
            rep.fitted.x1 = yc - 0.5 * sep;
            rep.fitted.x2 = yc + 0.5 * sep;
            rep.fitted.sigma = var > 0.0 ? std::sqrt(var) : 1.0;
            rep.fit_ok = true;
        }
    }
    return rep;
}

}  // namespace bohmlab
