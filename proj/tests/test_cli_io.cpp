#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bohmlab/config.hpp"
#include "bohmlab/fieldio.hpp"
#include "bohmlab/run.hpp"
#include "bohmlab/wavefield.hpp"

using namespace bohmlab;
namespace fs = std::filesystem;

namespace {

bool has_line_with(const std::vector<std::string>& lines, const std::string& needle) {
    for (const auto& l : lines)
        if (l.find(needle) != std::string::npos) return true;
    return false;
}

std::string sandbox(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "bohmlab_io_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("empty config text yields the documented defaults") {
    ExperimentConfig cfg = parse_config("");
    CHECK(cfg.grid.dims == 1);
    CHECK(cfg.grid.points[0] == 513);
    CHECK(cfg.grid.min[0] == -20.0);
    CHECK(cfg.grid.max[0] == 20.0);
    CHECK(cfg.initial.type == "gaussian");
    CHECK(cfg.initial.sigma[0] == 1.0);
    CHECK(cfg.potential.kind == "free");
    CHECK(cfg.evolve.dt > 0.0);
    CHECK(cfg.evolve.steps >= 1);
    CHECK(!cfg.trajectories.enabled);
    CHECK(cfg.diagnostics.residuals);
    CHECK(!cfg.diagnostics.screen);
    CHECK(cfg.output.directory == "out");
    CHECK(cfg.units.system == "natural");
    CHECK(cfg.units.hbar == 1.0);
    CHECK(cfg.units.mass == 1.0);
}

TEST_CASE("comments, blank lines, and inline whitespace are tolerated") {
    const char* text =
        "# leading comment\n"
        "\n"
        "[grid]\n"
        "  x_points   =  257   \n"
        "# x_min stays commented out until the next line\n"
        "x_min = -8\n"
        "x_max = 8\n";
    ExperimentConfig cfg = parse_config(text);
    CHECK(cfg.grid.points[0] == 257);
    CHECK(cfg.grid.min[0] == -8.0);
    CHECK(cfg.grid.max[0] == 8.0);
}

TEST_CASE("parse errors carry the offending line number") {
    CHECK_THROWS_AS(parse_config("[grid]\nbogus_key = 1\n"), ConfigError);
    try {
        parse_config("[grid]\nx_min = -5\nbogus_key = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("bogus_key") != std::string::npos);
        CHECK(msg.find("[grid]") != std::string::npos);
    }

    try {
        parse_config("\n[nowhere]\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("nowhere") != std::string::npos);
    }

    try {
        parse_config("x_min = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("before any section header") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config("[grid]\nx_min\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid\nx_min = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nx_points = 3.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nx_min = banana\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[trajectories]\nenabled = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[trajectories]\nseed = -4\n"), ConfigError);
}

TEST_CASE("semantic validation names the offending key") {
    auto expect_mentions = [](const char* text, const char* token) {
        try {
            parse_config(text);
            FAIL_CHECK("expected ConfigError mentioning ", token);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(token) != std::string::npos);
        }
    };
    expect_mentions("[grid]\ndims = 3\n", "dims");
    expect_mentions("[grid]\nx_min = 5\nx_max = -5\n", "x_min");
    expect_mentions("[grid]\nx_points = 4\n", "x_points");
    expect_mentions("[initial]\ntype = squircle\n", "type");
    expect_mentions("[initial]\nsigma_x = 0\n", "sigma_x");
    expect_mentions("[potential]\ntype = cubic\n", "type");
    expect_mentions("[potential]\nslit_width = 0\n", "slit_width");
    expect_mentions("[potential]\nomega = -1\n", "omega");
    expect_mentions("[evolve]\ndt = 0\n", "dt");
    expect_mentions("[evolve]\nsteps = 0\n", "steps");
    expect_mentions("[trajectories]\nenabled = true\ncount = 0\n", "count");
    expect_mentions("[units]\nsystem = imperial\n", "system");
    expect_mentions("[units]\nhbar = 0\n", "hbar");
    expect_mentions("[output]\ndirectory =\n", "directory");
}

TEST_CASE("emit and parse are mutually stable") {
    const char* text =
        "[grid]\n"
        "dims = 2\n"
        "x_min = -6\nx_max = 6\nx_points = 65\n"
        "y_min = -7.5\ny_max = 7.5\ny_points = 33\n"
        "[initial]\n"
        "type = gaussian\ncenter_x = -1.25\nsigma_y = 2\nk_x = 3.5\n"
        "[potential]\n"
        "type = two_slit\nwall_x = 0.5\nslit_y1 = -2\nslit_y2 = 2\nslit_width = 0.75\n"
        "[evolve]\n"
        "dt = 0.0005\nsteps = 40\nsnapshot_stride = 10\n"
        "[trajectories]\n"
        "enabled = true\ncount = 17\nseed = 99\n"
        "[diagnostics]\n"
        "residuals = false\nscreen_x = 4.25\n"
        "[output]\n"
        "directory = somewhere\nwrite_fields = false\n"
        "[units]\n"
        "hbar = 0.5\nmass = 2\n";
    ExperimentConfig cfg = parse_config(text);
    CHECK(cfg.grid.dims == 2);
    CHECK(cfg.grid.points[1] == 33);
    CHECK(cfg.initial.center[0] == -1.25);
    CHECK(cfg.initial.sigma[1] == 2.0);
    CHECK(cfg.potential.two_slit.slit_width == 0.75);
    CHECK(cfg.trajectories.seed == 99);
    CHECK(cfg.diagnostics.screen);
    CHECK(cfg.diagnostics.screen_x == 4.25);
    CHECK(!cfg.output.write_fields);
    CHECK(cfg.units.mass == 2.0);
    // units.mass must flow into the potential builder
    CHECK(cfg.potential.mass == 2.0);

    std::string once = emit_config(cfg);
    std::string twice = emit_config(parse_config(once));
    CHECK(once == twice);

    // 1D emission omits the y axis entirely
    std::string one_d = emit_config(parse_config("[grid]\ndims = 1\n"));
    CHECK(one_d.find("y_points") == std::string::npos);
    CHECK(one_d.find("x_points") != std::string::npos);
}

TEST_CASE("build_grid and build_initial honor the parsed spec") {
    ExperimentConfig cfg = parse_config(
        "[grid]\nx_min = -10\nx_max = 10\nx_points = 201\n"
        "[initial]\ntype = harmonic_ground\nomega = 2\n");
    Grid g = build_grid(cfg.grid);
    CHECK(g.dims == 1);
    CHECK(g.points[0] == 201);
    CHECK(g.spacing[0] == doctest::Approx(0.1));

    Warnings warn;
    WaveField f = build_initial(g, cfg.initial, cfg.units, &warn);
    CHECK(norm(f) == doctest::Approx(1.0).epsilon(1e-10));
    // ground state of omega=2 has variance 1/4
    std::vector<double> rho = density(f);
    double var = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        double x = g.coord(0, i);
        var += x * x * rho[i] * g.quad_weight(0, i);
    }
    CHECK(var == doctest::Approx(0.25).epsilon(1e-8));

    // vortex initial data needs two dimensions
    ExperimentConfig bad = parse_config("[initial]\ntype = vortex\n");
    CHECK_THROWS(build_initial(g, bad.initial, bad.units, nullptr));
}

TEST_CASE("crc32 matches the standard check value") {
    const char* probe = "123456789";
    CHECK(crc32_bytes(probe, 9) == 0xCBF43926u);
    CHECK(crc32_bytes(probe, 0) == 0u);
}

TEST_CASE("binary field round trip is bit-exact") {
    std::string dir = sandbox("roundtrip");

    Grid g1 = make_grid(1, {-9.0, 0.0}, {9.0, 0.0}, {129, 1});
    GaussianSpec gs;
    gs.center = {0.7, 0.0};
    gs.sigma = {1.3, 1.0};
    gs.k = {2.0, 0.0};
    WaveField f1 = gaussian_packet(g1, gs, 0.5, 2.0);
    f1.time = 3.25;
    write_field(dir + "/one.bohm", f1);
    WaveField r1 = read_field(dir + "/one.bohm");
    CHECK(r1.grid.dims == 1);
    CHECK(r1.grid.points[0] == 129);
    CHECK(r1.grid.min[0] == f1.grid.min[0]);
    CHECK(r1.grid.max[0] == f1.grid.max[0]);
    CHECK(r1.time == 3.25);
    CHECK(r1.hbar == 0.5);
    CHECK(r1.mass == 2.0);
    REQUIRE(r1.amp.size() == f1.amp.size());
    for (std::size_t i = 0; i < f1.amp.size(); ++i) CHECK(r1.amp[i] == f1.amp[i]);

    Grid g2 = make_grid(2, {-4.0, -5.0}, {4.0, 5.0}, {33, 17});
    WaveField f2 = vortex_packet(g2, {0.5, -0.5}, 1.1);
    write_field(dir + "/two.bohm", f2);
    WaveField r2 = read_field(dir + "/two.bohm");
    CHECK(r2.grid.dims == 2);
    CHECK(r2.grid.points[0] == 33);
    CHECK(r2.grid.points[1] == 17);
    REQUIRE(r2.amp.size() == f2.amp.size());
    for (std::size_t i = 0; i < f2.amp.size(); ++i) CHECK(r2.amp[i] == f2.amp[i]);

    // size on disk: magic(5) + dims(4) + axes(1*24) + 3 header f64 + payload
    std::uint64_t expect1 = 5 + 4 + 24 + 24 + 129 * 16;
    CHECK(file_size(dir + "/one.bohm") == expect1);
    CHECK(crc32_file(dir + "/one.bohm") ==
          crc32_bytes(slurp(dir + "/one.bohm").data(), expect1));
}

TEST_CASE("field reader rejects damaged inputs") {
    std::string dir = sandbox("damaged");
    Grid g = make_grid(1, {-3.0, 0.0}, {3.0, 0.0}, {17, 1});
    WaveField f = gaussian_packet(g, {});
    write_field(dir + "/ok.bohm", f);

    std::string blob = slurp(dir + "/ok.bohm");
    {
        std::ofstream os(dir + "/short.bohm", std::ios::binary);
        os.write(blob.data(), static_cast<std::streamsize>(blob.size() - 40));
    }
    CHECK_THROWS_AS(read_field(dir + "/short.bohm"), std::runtime_error);

    blob[0] = 'X';
    {
        std::ofstream os(dir + "/magic.bohm", std::ios::binary);
        os.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    }
    CHECK_THROWS_AS(read_field(dir + "/magic.bohm"), std::runtime_error);
    CHECK_THROWS_AS(read_field(dir + "/missing.bohm"), std::runtime_error);
    CHECK_THROWS_AS(crc32_file(dir + "/missing.bohm"), std::runtime_error);
    CHECK_THROWS_AS(file_size(dir + "/missing.bohm"), std::runtime_error);
}

TEST_CASE("csv export carries a header and one row per point") {
    std::string dir = sandbox("csv");
    Grid g = make_grid(1, {-1.0, 0.0}, {1.0, 0.0}, {9, 1});
    WaveField f = gaussian_packet(g, {});
    write_field_csv(dir + "/f.csv", f);
    std::ifstream is(dir + "/f.csv");
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line.find("x") != std::string::npos);
    CHECK(line.find("re") != std::string::npos);
    CHECK(line.find("im") != std::string::npos);
    std::size_t rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 9);
}

TEST_CASE("free packet experiment runs clean and records its outputs") {
    ExperimentConfig cfg = parse_config(
        "[grid]\nx_min = -16\nx_max = 16\nx_points = 257\n"
        "[initial]\ntype = gaussian\nk_x = 1\n"
        "[evolve]\ndt = 0.002\nsteps = 60\nsnapshot_stride = 15\n"
        "[trajectories]\nenabled = true\ncount = 40\nseed = 5\n");
    cfg.output.directory = sandbox("free_run");
    RunReport rep = run_experiment(cfg);

    CHECK(rep.exit_code == 0);
    CHECK(rep.failures.empty());
    CHECK(has_line_with(rep.lines, "grid: 1D, 257 points"));
    CHECK(has_line_with(rep.lines, "initial: gaussian, potential: free"));
    CHECK(has_line_with(rep.lines, "evolved 60 steps"));
    CHECK(has_line_with(rep.lines, "norm drift:"));
    CHECK(has_line_with(rep.lines, "phase residual"));
    CHECK(has_line_with(rep.lines, "continuity residual:"));
    CHECK(has_line_with(rep.lines, "entropy residual:"));
    CHECK(has_line_with(rep.lines, "entropy/continuity transform defect:"));
    CHECK(has_line_with(rep.lines, "trajectories: 40 particles"));
    CHECK(has_line_with(rep.lines, "crossing violations: 0"));

    std::vector<std::string> names;
    for (const auto& fr : rep.files) {
        fs::path p(fr.path);
        names.push_back(p.filename().string());
        CHECK(fs::exists(p));
        CHECK(file_size(fr.path) == fr.bytes);
        CHECK(crc32_file(fr.path) == fr.crc32);
    }
    for (const char* want : {"config.txt", "initial.bohm", "final.bohm", "final.csv",
                             "trajectories.csv"})
        CHECK(std::find(names.begin(), names.end(), want) != names.end());

    // report.txt mirrors the in-memory report
    std::string text = slurp(cfg.output.directory + "/report.txt");
    CHECK(text.find("# run report") != std::string::npos);
    for (const auto& l : rep.lines) CHECK(text.find(l) != std::string::npos);
    CHECK(text.find("crc32=") != std::string::npos);
    CHECK(format_report(rep) == text);

    // the emitted config reproduces the run configuration
    ExperimentConfig echo = parse_config(slurp(cfg.output.directory + "/config.txt"));
    CHECK(emit_config(echo) == emit_config(cfg));

    // stored final snapshot matches the advertised CRC
    WaveField back = read_field(cfg.output.directory + "/final.bohm");
    CHECK(back.grid.points[0] == 257);
    CHECK(back.time == doctest::Approx(0.12).epsilon(1e-12));
}

TEST_CASE("experiments are deterministic across runs") {
    auto run_once = [](const std::string& dir) {
        ExperimentConfig cfg = parse_config(
            "[grid]\nx_min = -14\nx_max = 14\nx_points = 129\n"
            "[initial]\ntype = gaussian\nk_x = 0.5\n"
            "[evolve]\ndt = 0.004\nsteps = 30\nsnapshot_stride = 10\n"
            "[trajectories]\nenabled = true\ncount = 25\nseed = 11\n");
        cfg.output.directory = dir;
        return run_experiment(cfg);
    };
    RunReport a = run_once(sandbox("det_a"));
    RunReport b = run_once(sandbox("det_b"));
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        std::string name = fs::path(a.files[i].path).filename().string();
        CHECK(name == fs::path(b.files[i].path).filename().string());
        CHECK(a.files[i].bytes == b.files[i].bytes);
        // the config echo embeds the output directory, so its bytes differ
        if (name == "config.txt") continue;
        CHECK(a.files[i].crc32 == b.files[i].crc32);
    }
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
}

TEST_CASE("harmonic eigenstate run reports the energy-balance check") {
    ExperimentConfig cfg = parse_config(
        "[grid]\nx_min = -12\nx_max = 12\nx_points = 257\n"
        "[initial]\ntype = harmonic_ground\nomega = 1\n"
        "[potential]\ntype = harmonic\nomega = 1\n"
        "[evolve]\ndt = 0.002\nsteps = 40\nsnapshot_stride = 10\n");
    cfg.output.directory = sandbox("harmonic_run");
    cfg.output.write_fields = false;
    RunReport rep = run_experiment(cfg);
    CHECK(rep.exit_code == 0);
    CHECK(has_line_with(rep.lines, "U+Q constancy: max deviation"));
    CHECK(has_line_with(rep.lines, "from 0.5"));
}

TEST_CASE("probe diagnostics report without gating the exit code") {
    ExperimentConfig cfg = parse_config(
        "[grid]\nx_min = -16\nx_max = 16\nx_points = 257\n"
        "[initial]\ntype = gaussian\n"
        "[evolve]\ndt = 0.002\nsteps = 40\nsnapshot_stride = 10\n"
        "[diagnostics]\nprobes = true\n");
    cfg.output.directory = sandbox("probe_run");
    cfg.output.write_fields = false;
    cfg.output.write_csv = false;
    RunReport rep = run_experiment(cfg);
    CHECK(rep.exit_code == 0);
    CHECK(has_line_with(rep.lines, "probe b1: max discrepancy"));
    CHECK(has_line_with(rep.lines, "probe b2: max discrepancy"));
    CHECK(has_line_with(rep.lines, "direction rate: max |n_dot|"));
}

TEST_CASE("si report run prints the tabulated constants") {
    ExperimentConfig cfg = parse_config(
        "[grid]\nx_min = -10\nx_max = 10\nx_points = 65\n"
        "[evolve]\ndt = 0.004\nsteps = 10\nsnapshot_stride = 5\n"
        "[diagnostics]\nresiduals = false\n"
        "[units]\nsystem = si_report\n");
    cfg.output.directory = sandbox("si_run");
    cfg.output.write_fields = false;
    cfg.output.write_csv = false;
    RunReport rep = run_experiment(cfg);
    CHECK(rep.exit_code == 0);
    CHECK(has_line_with(rep.lines, "slowness constant s = 4.571029e-07 s/m"));
    CHECK(has_line_with(rep.lines, "epsilon radius (electron) = 2.645886e-11 m"));
    CHECK(has_line_with(rep.lines, "epsilon radius (proton)"));
    CHECK(has_line_with(rep.lines, "epsilon radius (neutron)"));
    CHECK(has_line_with(rep.lines, "s * c * alpha = 0.999999999"));
}
