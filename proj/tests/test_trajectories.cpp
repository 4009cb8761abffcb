#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "bohmlab/evolve.hpp"
#include "bohmlab/potential.hpp"
#include "bohmlab/trajectories.hpp"
#include "bohmlab/wavefield.hpp"

using namespace bohmlab;

namespace {
constexpr double pi = std::numbers::pi;

std::vector<WaveField> still_series(const WaveField& f0, double t1) {
    WaveField late = f0;
    late.time = t1;
    return {f0, late};
}
}  // namespace

TEST_CASE("1d sampling reproduces the density moments") {
    Grid g = make_grid(1, {-12.0, 0.0}, {12.0, 0.0}, {1025, 1});
    GaussianSpec spec;
    spec.center = {0.5, 0.0};
    WaveField f = gaussian_packet(g, spec);
    auto pts = sample_initial(f, 100000, 7);
    REQUIRE(pts.size() == 100000);
    double mean = 0.0;
    for (auto& p : pts) mean += p[0];
    mean /= static_cast<double>(pts.size());
    double var = 0.0;
    for (auto& p : pts) var += (p[0] - mean) * (p[0] - mean);
    var /= static_cast<double>(pts.size());
    CHECK(std::abs(mean - 0.5) < 0.02);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 0.02);
}

TEST_CASE("sampling is deterministic in the seed") {
    Grid g = make_grid(1, {-12.0, 0.0}, {12.0, 0.0}, {513, 1});
    WaveField f = gaussian_packet(g, {});
    auto a = sample_initial(f, 5000, 42);
    auto b = sample_initial(f, 5000, 42);
    auto c = sample_initial(f, 5000, 43);
    CHECK(a == b);
    CHECK(a != c);

    auto one = sample_initial(f, 1, 1);
    REQUIRE(one.size() == 1);
    CHECK(g.contains(one[0][0]));
}

TEST_CASE("uniform density samples uniformly") {
    Grid g = make_grid(1, {-16.0, 0.0}, {16.0, 0.0}, {513, 1});
    WaveField pw = plane_wave(g, {0.0, 0.0});
    auto pts = sample_initial(pw, 100000, 11);
    std::vector<double> xs(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) xs[i] = pts[i][0];
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double cdf = (xs[i] + 16.0) / 32.0;
        double emp_hi = static_cast<double>(i + 1) / static_cast<double>(xs.size());
        double emp_lo = static_cast<double>(i) / static_cast<double>(xs.size());
        ks = std::max({ks, std::abs(cdf - emp_hi), std::abs(cdf - emp_lo)});
    }
    CHECK(ks < 0.01);
}

TEST_CASE("2d rejection sampling matches both axis widths") {
    Grid g = make_grid(2, {-8.0, -8.0}, {8.0, 8.0}, {257, 257});
    GaussianSpec spec;
    spec.center = {0.5, -0.25};
    spec.sigma = {1.0, 0.5};
    WaveField f = gaussian_packet(g, spec);
    auto pts = sample_initial(f, 40000, 3);
    double mx = 0.0, my = 0.0;
    for (auto& p : pts) {
        mx += p[0];
        my += p[1];
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double vx = 0.0, vy = 0.0;
    for (auto& p : pts) {
        vx += (p[0] - mx) * (p[0] - mx);
        vy += (p[1] - my) * (p[1] - my);
    }
    vx /= static_cast<double>(pts.size());
    vy /= static_cast<double>(pts.size());
    CHECK(std::abs(mx - 0.5) < 0.02);
    CHECK(std::abs(my + 0.25) < 0.02);
    CHECK(std::abs(std::sqrt(vx) - 1.0) < 0.03);
    CHECK(std::abs(std::sqrt(vy) - 0.5) < 0.02);
}

TEST_CASE("sampling rejects a degenerate field") {
    Grid g = make_grid(1, {-4.0, 0.0}, {4.0, 0.0}, {65, 1});
    WaveField dead;
    dead.grid = g;
    dead.amp.assign(g.size(), 0.0);
    CHECK_THROWS_AS(sample_initial(dead, 10, 1), std::invalid_argument);
}

TEST_CASE("velocity queries reproduce known flows") {
    Grid g = make_grid(1, {-16.0, 0.0}, {16.0, 0.0}, {257, 1});
    double k = 2.0 * pi * 5.0 / 32.0;
    WaveField pw = plane_wave(g, {k, 0.0});
    EvolutionPlan plan;
    plan.dt = 5e-3;
    plan.steps = 4;
    plan.snapshot_stride = 1;
    EvolveResult res = evolve(pw, make_free(g), plan);
    for (double x : {-3.0, 0.0, 7.5}) {
        auto v = velocity_at(res.snapshots, {x, 0.0}, 0.01);
        REQUIRE(v.has_value());
        CHECK((*v)[0] == doctest::Approx(k).epsilon(1e-9));
    }

    WaveField ground = harmonic_ground(g, 1.0);
    auto still = still_series(ground, 0.1);
    auto v0 = velocity_at(still, {0.5, 0.0}, 0.05);
    REQUIRE(v0.has_value());
    CHECK(std::abs((*v0)[0]) < 1e-10);
}

TEST_CASE("velocity of the spreading packet matches the analytic profile") {
    Grid g = make_grid(1, {-25.0, 0.0}, {25.0, 0.0}, {1025, 1});
    WaveField f = gaussian_packet(g, {});
    EvolutionPlan plan;
    plan.dt = 1e-3;
    plan.steps = 1000;
    plan.snapshot_stride = 100;
    EvolveResult res = evolve(f, make_free(g), plan);
    VelocitySeries series(res.snapshots);
    for (double t : {0.25, 0.5, 0.9}) {
        for (double x : {0.5, 1.0, 2.0}) {
            auto v = series.at({x, 0.0}, t);
            REQUIRE(v.has_value());
            double expect = x * 0.25 * t / (1.0 + 0.25 * t * t);
            CHECK((*v)[0] == doctest::Approx(expect).epsilon(1e-3));
        }
    }
    CHECK_THROWS_AS(series.at({0.0, 0.0}, 2.0), std::invalid_argument);
    CHECK(!series.at({40.0, 0.0}, 0.5).has_value());
}

TEST_CASE("node regions return no velocity") {
    Grid g = make_grid(1, {-14.0, 0.0}, {14.0, 0.0}, {513, 1});
    GaussianSpec left, right;
    left.center = {-2.0, 0.0};
    right.center = {2.0, 0.0};
    WaveField f = superpose(gaussian_packet(g, left), gaussian_packet(g, right), 1.0, -1.0);
    DecomposeOptions opt;
    opt.rho_floor_rel = 1e-3;
    VelocitySeries series(still_series(f, 0.1), opt);
    CHECK(!series.at({0.0, 0.0}, 0.05).has_value());    // antisymmetric node
    CHECK(series.at({-2.0, 0.0}, 0.05).has_value());    // packet body
}

TEST_CASE("free-packet trajectories follow the scaling law") {
    Grid g = make_grid(1, {-25.0, 0.0}, {25.0, 0.0}, {1025, 1});
    WaveField f = gaussian_packet(g, {});
    EvolutionPlan plan;
    plan.dt = 1e-3;
    plan.steps = 1000;
    plan.snapshot_stride = 50;
    EvolveResult res = evolve(f, make_free(g), plan);
    std::vector<std::array<double, 2>> x0{{0.5, 0.0}, {1.0, 0.0}, {1.5, 0.0}, {-2.0, 0.0}};
    TrajectoryEnsemble ens = integrate(res.snapshots, x0, 1);
    REQUIRE(ens.times.size() == res.snapshots.size());
    double stretch = std::sqrt(1.25);  // sigma(1)/sigma(0)
    for (std::size_t p = 0; p < x0.size(); ++p) {
        CHECK(ens.flags[p] == ParticleFlag::ok);
        double fin = ens.positions.back()[p][0];
        CHECK(std::abs(fin - x0[p][0] * stretch) < 5e-3 * std::max(1.0, std::abs(x0[p][0])));
    }
}

TEST_CASE("plane-wave trajectories are straight lines and can exit") {
    Grid g = make_grid(1, {-16.0, 0.0}, {16.0, 0.0}, {257, 1});
    double k = 2.0 * pi * 5.0 / 32.0;
    WaveField pw = plane_wave(g, {k, 0.0});
    EvolutionPlan plan;
    plan.dt = 1e-2;
    plan.steps = 100;
    plan.snapshot_stride = 10;
    EvolveResult res = evolve(pw, make_free(g), plan);
    std::vector<std::array<double, 2>> x0{{-5.0, 0.0}, {0.0, 0.0}, {15.5, 0.0}, {16.5, 0.0}};
    TrajectoryEnsemble ens = integrate(res.snapshots, x0, 1);
    for (std::size_t ti = 0; ti < ens.times.size(); ++ti) {
        double t = ens.times[ti];
        CHECK(ens.positions[ti][0][0] == doctest::Approx(-5.0 + k * t).epsilon(1e-9));
        CHECK(ens.positions[ti][1][0] == doctest::Approx(0.0 + k * t).epsilon(1e-9));
    }
    CHECK(ens.flags[0] == ParticleFlag::ok);
    // a particle drifting toward the edge freezes once an RK stage samples
    // beyond the last grid point, where the velocity field is undefined
    CHECK(ens.flags[2] == ParticleFlag::frozen);
    CHECK(ens.positions.back()[2][0] > 15.5);
    CHECK(ens.positions.back()[2][0] <= 16.0);
    CHECK(ens.flags[3] == ParticleFlag::exited);  // started outside the grid
}

TEST_CASE("integration is deterministic") {
    Grid g = make_grid(1, {-20.0, 0.0}, {20.0, 0.0}, {513, 1});
    WaveField f = gaussian_packet(g, {});
    EvolutionPlan plan;
    plan.dt = 2e-3;
    plan.steps = 200;
    plan.snapshot_stride = 20;
    EvolveResult res = evolve(f, make_free(g), plan);
    auto x0 = sample_initial(res.snapshots.front(), 200, 9);
    TrajectoryEnsemble a = integrate(res.snapshots, x0, 9);
    TrajectoryEnsemble b = integrate(res.snapshots, x0, 9);
    REQUIRE(a.positions.size() == b.positions.size());
    for (std::size_t t = 0; t < a.positions.size(); ++t)
        CHECK(a.positions[t] == b.positions[t]);
}

TEST_CASE("1d particle order is preserved, and shuffles are caught") {
    Grid g = make_grid(1, {-20.0, 0.0}, {20.0, 0.0}, {513, 1});
    WaveField f = gaussian_packet(g, {});
    EvolutionPlan plan;
    plan.dt = 2e-3;
    plan.steps = 500;
    plan.snapshot_stride = 25;
    EvolveResult res = evolve(f, make_free(g), plan);
    auto x0 = sample_initial(res.snapshots.front(), 300, 5);
    TrajectoryEnsemble ens = integrate(res.snapshots, x0, 5);
    CrossingReport rep = crossing_check(ens);
    CHECK(rep.violations == 0);

    // negative control: swap two interior particles at one stored time
    TrajectoryEnsemble bad = ens;
    std::swap(bad.positions[10][20], bad.positions[10][220]);
    CrossingReport caught = crossing_check(bad);
    CHECK(caught.violations > 0);
    CHECK(!caught.details.empty());
}

TEST_CASE("crossing check is restricted to one dimension") {
    TrajectoryEnsemble ens;
    ens.dims = 2;
    ens.times = {0.0, 1.0};
    ens.positions = {{{0.0, 0.0}}, {{1.0, 1.0}}};
    ens.flags = {ParticleFlag::ok};
    CHECK_THROWS_AS(crossing_check(ens), std::invalid_argument);
}

TEST_CASE("ensembles stay distributed like the density") {
    Grid g = make_grid(1, {-25.0, 0.0}, {25.0, 0.0}, {1025, 1});
    WaveField f = gaussian_packet(g, {});
    EvolutionPlan plan;
    plan.dt = 2e-3;
    plan.steps = 500;
    plan.snapshot_stride = 50;
    EvolveResult res = evolve(f, make_free(g), plan);
    std::size_t count = 20000;
    auto x0 = sample_initial(res.snapshots.front(), count, 17);
    TrajectoryEnsemble ens = integrate(res.snapshots, x0, 17);

    const WaveField& last = res.snapshots.back();
    RealField rho = density(last);
    const int bins = 50;
    double lo = -6.0, hi = 6.0, bw = (hi - lo) / bins;
    std::vector<double> expect(bins, 0.0), got(bins, 0.0);
    for (int bq = 0; bq < bins; ++bq) {
        double a = lo + bw * bq, c = lo + bw * (bq + 1);
        // integrate rho over the bin by fine sampling
        int sub = 20;
        double acc = 0.0;
        for (int s = 0; s < sub; ++s) {
            double x = a + (c - a) * (s + 0.5) / sub;
            auto i = static_cast<std::size_t>(std::lround((x - g.min[0]) / g.spacing[0]));
            acc += rho[i];
        }
        expect[bq] = acc * (c - a) / sub;
    }
    std::size_t inside = 0;
    for (std::size_t p = 0; p < count; ++p) {
        double x = ens.positions.back()[p][0];
        if (x < lo || x >= hi) continue;
        got[static_cast<std::size_t>((x - lo) / bw)] += 1.0;
        ++inside;
    }
    double expect_total = 0.0;
    for (double e : expect) expect_total += e;
    double tv = 0.0;
    for (int bq = 0; bq < bins; ++bq)
        tv += 0.5 * std::abs(expect[bq] / expect_total - got[bq] / static_cast<double>(inside));
    CHECK(tv < 0.05);
}
