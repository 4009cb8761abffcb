#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bohmlab/interference.hpp"
#include "bohmlab/wavefield.hpp"

using namespace bohmlab;

namespace {
constexpr double pi = std::numbers::pi;

double simpson(const std::vector<double>& f, double h) {
    double acc = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < f.size(); ++i) acc += f[i] * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}
}  // namespace

TEST_CASE("slit densities are normal laws with mirror symmetry") {
    SlitModel m;  // x1 = -0.5, x2 = 0.5, sigma = 1
    CHECK(slit_density(m, 1, -0.5) == doctest::Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-12));
    CHECK(slit_density(m, 2, 0.5) == doctest::Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-12));
    CHECK(slit_density(m, 1, 0.0) == doctest::Approx(0.35206532676429952).epsilon(1e-12));
    for (double x : {0.3, 1.1, -2.4})
        CHECK(slit_density(m, 1, x) == doctest::Approx(slit_density(m, 2, -x)).epsilon(1e-13));
    CHECK_THROWS_AS(slit_density(m, 3, 0.0), std::invalid_argument);
}

TEST_CASE("model validation rejects degenerate parameters") {
    SlitModel bad;
    bad.sigma = 0.0;
    CHECK_THROWS_AS(pattern(bad, 0.0), std::invalid_argument);
    SlitModel same;
    same.x1 = same.x2 = 0.4;
    CHECK_THROWS_AS(pattern(same, 0.0), std::invalid_argument);
    SlitModel nok;
    nok.k = -1.0;
    CHECK_THROWS_AS(pattern(nok, 0.0), std::invalid_argument);
}

TEST_CASE("central pattern value doubles one slit density") {
    SlitModel m;
    double p0 = pattern(m, 0.0);
    CHECK(p0 == doctest::Approx(2.0 * slit_density(m, 1, 0.0)).epsilon(1e-13));
    CHECK(p0 == doctest::Approx(0.70413065352859904).epsilon(1e-10));
    CHECK(std::abs(p0 - 0.70414) < 2e-5);
}

TEST_CASE("pattern stays inside the superposition envelope") {
    SlitModel m;
    for (int i = 0; i <= 600; ++i) {
        double x = -6.0 + 0.02 * i;
        double r1 = slit_density(m, 1, x), r2 = slit_density(m, 2, x);
        double up = 0.5 * (std::sqrt(r1) + std::sqrt(r2)) * (std::sqrt(r1) + std::sqrt(r2));
        double dn = 0.5 * (std::sqrt(r1) - std::sqrt(r2)) * (std::sqrt(r1) - std::sqrt(r2));
        double p = pattern(m, x);
        CHECK(p <= up + 1e-13);
        CHECK(p >= dn - 1e-13);
        CHECK(pattern_midline(m, x) == doctest::Approx(0.5 * (r1 + r2)).epsilon(1e-13));
    }
}

TEST_CASE("cross term oscillates as the plain cosine") {
    SlitModel m;
    m.k = 3.0;
    for (double x : {0.1, 0.7, -1.3, 2.9}) {
        double r1 = slit_density(m, 1, x), r2 = slit_density(m, 2, x);
        double cross = (pattern(m, x) - pattern_midline(m, x)) / std::sqrt(r1 * r2);
        CHECK(cross == doctest::Approx(std::cos(3.0 * x)).epsilon(1e-12));
    }
}

TEST_CASE("superposition limits") {
    auto eq = superposition_limits(0.7, 0.7);
    CHECK(eq.first == doctest::Approx(std::exp(-1.4)).epsilon(1e-13));
    CHECK(eq.second == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

    auto uneven = superposition_limits(0.0, std::log(2.0));
    CHECK(uneven.first == doctest::Approx(9.0 / 16.0).epsilon(1e-13));
    CHECK(uneven.second == doctest::Approx(1.0 / 16.0).epsilon(1e-13));

    auto faded = superposition_limits(0.3, 40.0);
    CHECK(faded.first == doctest::Approx(0.25 * std::exp(-0.6)).epsilon(1e-8));
    CHECK(faded.second == doctest::Approx(0.25 * std::exp(-0.6)).epsilon(1e-8));
}

TEST_CASE("pattern integrates to one plus the overlap correction") {
    // closed form: 1 + exp(-(x1-x2)^2/(8 sigma^2) - k^2 sigma^2 / 2)
    for (double k : {1.0, 2.0 * pi}) {
        SlitModel m;
        m.k = k;
        double h = 5e-4;
        std::size_t n = static_cast<std::size_t>(std::lround(24.0 / h)) + 1;
        std::vector<double> vals(n);
        for (std::size_t i = 0; i < n; ++i) vals[i] = pattern(m, -12.0 + h * static_cast<double>(i));
        double total = simpson(vals, h);
        double expect = 1.0 + std::exp(-0.125 - 0.5 * k * k);
        CHECK(total == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("tabulate exposes consistent columns") {
    SlitModel m;
    auto rows = tabulate(m, -3.0, 3.0, 121);
    REQUIRE(rows.size() == 121);
    CHECK(rows.front().x == doctest::Approx(-3.0));
    CHECK(rows.back().x == doctest::Approx(3.0));
    for (const auto& r : rows) {
        CHECK(r.P == doctest::Approx(pattern(m, r.x)).epsilon(1e-13));
        CHECK(r.midline == doctest::Approx(0.5 * (r.rho1 + r.rho2)).epsilon(1e-13));
    }
}

TEST_CASE("fringe analysis recovers a synthetic pattern") {
    Grid g = make_grid(1, {-12.0, 0.0}, {12.0, 0.0}, {1025, 1});
    double spacing = 1.5, env_sigma = 4.0;
    WaveField screen;
    screen.grid = g;
    screen.amp.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double y = g.coord(0, i);
        double rho = std::exp(-0.5 * y * y / (env_sigma * env_sigma)) *
                     (1.0 + std::cos(2.0 * pi * y / spacing));
        screen.amp[i] = std::sqrt(rho);
    }

    FraunhoferGeometry geom;
    geom.slit_separation = 5.0;
    geom.packet_k = 8.0;
    geom.screen_distance = spacing * geom.packet_k * geom.slit_separation / (2.0 * pi);
    geom.window_half = 6.0;

    InterferenceReport rep = compare_simulated(screen, 0.0, geom);
    CHECK(rep.predicted_spacing == doctest::Approx(spacing).epsilon(1e-12));
    CHECK(rep.peaks.size() >= 5);
    // the gaussian envelope drags each product peak toward the center by
    // 2 E'/(E k^2), contracting measured gaps by the relative factor 2/(sigma k)^2
    double kf = 2.0 * pi / spacing;
    double env_shift = 2.0 / (env_sigma * env_sigma * kf * kf);
    CHECK(rep.fringe_spacing == doctest::Approx(spacing * (1.0 - env_shift)).epsilon(5e-4));
    CHECK(rep.spacing_error < 1e-2);
    CHECK(std::abs(rep.central_offset) < 0.25 * spacing);
    CHECK(rep.fit_ok);
    CHECK(rep.fitted_contrast > 0.8);
}

TEST_CASE("fringe analysis extracts the requested column of a 2d snapshot") {
    Grid g = make_grid(2, {-4.0, -12.0}, {4.0, 12.0}, {65, 513});
    double spacing = 2.0;
    WaveField snap;
    snap.grid = g;
    snap.amp.resize(g.size());
    for (std::size_t ix = 0; ix < g.points[0]; ++ix) {
        double x = g.coord(0, ix);
        double gx = std::exp(-0.25 * (x - 1.0) * (x - 1.0));
        for (std::size_t iy = 0; iy < g.points[1]; ++iy) {
            double y = g.coord(1, iy);
            double rho = gx * std::exp(-0.02 * y * y) * (1.0 + std::cos(2.0 * pi * y / spacing));
            snap.amp[g.index(ix, iy)] = std::sqrt(rho);
        }
    }
    FraunhoferGeometry geom;
    geom.slit_separation = 4.0;
    geom.packet_k = 10.0;
    geom.screen_distance = spacing * geom.packet_k * geom.slit_separation / (2.0 * pi);
    geom.window_half = 7.0;
    InterferenceReport rep = compare_simulated(snap, 2.0, geom);
    REQUIRE(rep.screen_coord.size() == g.points[1]);
    CHECK(rep.screen_coord.front() == doctest::Approx(-12.0));
    // envelope exp(-0.02 y^2): peak gaps contract by 2/(sigma k)^2 = 0.08/k^2
    double kf = 2.0 * pi / spacing;
    double env_shift = 0.08 / (kf * kf);
    CHECK(rep.fringe_spacing == doctest::Approx(spacing * (1.0 - env_shift)).epsilon(5e-4));
    CHECK(rep.spacing_error < 1.2e-2);
}

TEST_CASE("single-slit profile yields no fitted oscillation") {
    Grid g = make_grid(1, {-12.0, 0.0}, {12.0, 0.0}, {1025, 1});
    WaveField screen;
    screen.grid = g;
    screen.amp.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double y = g.coord(0, i);
        screen.amp[i] = std::exp(-0.05 * y * y);
    }
    FraunhoferGeometry geom;
    geom.slit_separation = 5.0;
    geom.packet_k = 8.0;
    geom.screen_distance = 10.0;
    geom.window_half = 6.0;
    InterferenceReport rep = compare_simulated(screen, 0.0, geom);
    CHECK(rep.fitted_contrast < 0.1);
}

TEST_CASE("degenerate screen profiles are rejected") {
    Grid g = make_grid(1, {-4.0, 0.0}, {4.0, 0.0}, {65, 1});
    WaveField empty;
    empty.grid = g;
    empty.amp.assign(g.size(), 0.0);
    FraunhoferGeometry geom;
    geom.slit_separation = 1.0;
    geom.packet_k = 1.0;
    geom.screen_distance = 1.0;
    CHECK_THROWS_AS(compare_simulated(empty, 0.0, geom), std::runtime_error);
}
