// Command-line front end: config-driven experiments plus a few direct
// analytic utilities. Exit codes: 0 ok, 1 config/usage error, 2 failed
// numerical assertion.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bohmlab/constants.hpp"
#include "bohmlab/interference.hpp"
#include "bohmlab/propagator.hpp"
#include "bohmlab/run.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw bohmlab::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int run_config(const std::string& path, const std::function<void(bohmlab::ExperimentConfig&)>& tweak) {
    bohmlab::ExperimentConfig cfg = bohmlab::parse_config(slurp(path));
    if (tweak) tweak(cfg);
    bohmlab::RunReport rep = bohmlab::run_experiment(cfg);
    std::cout << bohmlab::format_report(rep);
    return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-hydrodynamics workbench"};
    app.require_subcommand(1);

    std::string config_path;
    long particles = -1;
    long long seed = -1;

    auto* cmd_run = app.add_subcommand("run", "full pipeline from a config file");
    cmd_run->add_option("--config", config_path, "experiment config")->required();

    auto* cmd_evolve = app.add_subcommand("evolve", "evolve and export snapshots only");
    cmd_evolve->add_option("--config", config_path, "experiment config")->required();

    auto* cmd_traj = app.add_subcommand("trajectories", "evolve and integrate trajectories");
    cmd_traj->add_option("--config", config_path, "experiment config")->required();
    cmd_traj->add_option("--particles", particles, "override particle count");
    cmd_traj->add_option("--seed", seed, "override sampling seed");

    auto* cmd_diag = app.add_subcommand("diagnostics", "evolve with every diagnostic enabled");
    cmd_diag->add_option("--config", config_path, "experiment config")->required();

    bohmlab::SlitModel model;
    double xmin = -6.0, xmax = 6.0;
    std::size_t samples = 1201;
    std::string out_path;
    auto* cmd_int = app.add_subcommand("interfere", "tabulate the analytic two-slit pattern");
    cmd_int->add_option("--x1", model.x1, "first slit center");
    cmd_int->add_option("--x2", model.x2, "second slit center");
    cmd_int->add_option("--sigma", model.sigma, "slit image width");
    cmd_int->add_option("--k", model.k, "pattern wave number");
    cmd_int->add_option("--xmin", xmin, "screen range start");
    cmd_int->add_option("--xmax", xmax, "screen range end");
    cmd_int->add_option("--samples", samples, "sample count");
    cmd_int->add_option("--out", out_path, "CSV path (default stdout)");

    std::string system_kind = "free";
    std::vector<std::size_t> m_list{4, 8, 16, 32};
    double theta = 0.02, total_t = 1.0, x_start = 0.0, x_end = 1.0, omega = 1.0;
    auto* cmd_prop = app.add_subcommand("propagator", "lattice propagator convergence study");
    cmd_prop->add_option("--system", system_kind, "free or harmonic");
    cmd_prop->add_option("--M", m_list, "slice counts (repeat or space-separate)");
    cmd_prop->add_option("--theta", theta, "damping angle");
    cmd_prop->add_option("--T", total_t, "total time");
    cmd_prop->add_option("--x0", x_start, "start point");
    cmd_prop->add_option("--x1", x_end, "end point");
    cmd_prop->add_option("--omega", omega, "harmonic frequency");
    cmd_prop->add_option("--out", out_path, "CSV path (default stdout)");

    auto* cmd_const = app.add_subcommand("constants", "slowness constant and radii table");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) return run_config(config_path, nullptr);
        if (cmd_evolve->parsed())
            return run_config(config_path, [](bohmlab::ExperimentConfig& cfg) {
                cfg.trajectories.enabled = false;
                cfg.diagnostics = {};
                cfg.diagnostics.residuals = false;
            });
        if (cmd_traj->parsed())
            return run_config(config_path, [&](bohmlab::ExperimentConfig& cfg) {
                cfg.trajectories.enabled = true;
                if (particles > 0) cfg.trajectories.count = static_cast<std::size_t>(particles);
                if (seed >= 0) cfg.trajectories.seed = static_cast<std::uint64_t>(seed);
            });
        if (cmd_diag->parsed())
            return run_config(config_path, [](bohmlab::ExperimentConfig& cfg) {
                cfg.diagnostics.residuals = true;
                cfg.diagnostics.circulation = true;
                cfg.diagnostics.probes = true;
            });

        if (cmd_int->parsed()) {
            auto rows = bohmlab::tabulate(model, xmin, xmax, samples);
            std::ostream* os = &std::cout;
            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path);
                if (!file) throw std::runtime_error("cannot open '" + out_path + "'");
                os = &file;
            }
            *os << "x,P,midline,rho1,rho2\n";
            char buf[160];
            for (const auto& r : rows) {
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.x, r.P,
                              r.midline, r.rho1, r.rho2);
                *os << buf;
            }
            return 0;
        }

        if (cmd_prop->parsed()) {
            bohmlab::PropagatorSystem sys;
            sys.kind = system_kind;
            sys.omega = omega;
            bohmlab::LatticeSpec base;
            base.theta = theta;
            if (system_kind == "harmonic") {
                base.q_min = -12.0;
                base.q_max = 12.0;
                base.q_points = 1601;
            }
            auto table = bohmlab::convergence_study(sys, base, x_start, x_end, total_t, m_list);
            std::ostream* os = &std::cout;
            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path);
                if (!file) throw std::runtime_error("cannot open '" + out_path + "'");
                os = &file;
            }
            *os << "M,error,order\n";
            char buf[120];
            for (const auto& row : table.rows) {
                if (table.has_order)
                    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.6g\n", row.M, row.error,
                                  table.fitted_order);
                else
                    std::snprintf(buf, sizeof(buf), "%zu,%.17g,\n", row.M, row.error);
                *os << buf;
            }
            return 0;
        }

        if (cmd_const->parsed()) {
            bohmlab::PhysicalConstants pc;
            double s = bohmlab::slowness_constant(pc);
            std::printf("slowness constant s        %.9e s/m\n", s);
            std::printf("epsilon radius (electron)  %.9e m\n",
                        bohmlab::epsilon_radius(pc.m_electron, pc));
            std::printf("epsilon radius (proton)    %.9e m\n",
                        bohmlab::epsilon_radius(pc.m_proton, pc));
            std::printf("epsilon radius (neutron)   %.9e m\n",
                        bohmlab::epsilon_radius(pc.m_neutron, pc));
            std::printf("s * c * alpha              %.12f\n", s * pc.c * pc.alpha);
            return 0;
        }
    } catch (const bohmlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
