#include "bohmlab/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include "bohmlab/bohm.hpp"
#include "bohmlab/complexified.hpp"
#include "bohmlab/constants.hpp"
#include "bohmlab/fieldio.hpp"
#include "bohmlab/interference.hpp"
#include "bohmlab/trajectories.hpp"
#include "bohmlab/util.hpp"

namespace bohmlab {

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("run: cannot open '" + path + "'");
    os << content;
    if (!os) throw std::runtime_error("run: write failed for '" + path + "'");
}

void record(RunReport& rep, const std::string& path) {
    rep.files.push_back({path, crc32_file(path), file_size(path)});
}

// index whose neighbors are evenly spaced in time, preferring the middle;
// the centered time differences of the residual operators need that
std::optional<std::size_t> pick_uniform_index(const std::vector<double>& times) {
    if (times.size() < 3) return std::nullopt;
    std::size_t n = times.size();
    auto uniform = [&](std::size_t i) {
        double fwd = times[i + 1] - times[i];
        double bwd = times[i] - times[i - 1];
        return std::abs(fwd - bwd) <= 1e-9 * std::max(std::abs(fwd), std::abs(bwd));
    };
    std::size_t mid = n / 2;
    for (std::size_t off = 0; off < n; ++off) {
        if (mid >= 1 + off && mid - off + 1 < n && uniform(mid - off)) return mid - off;
        if (mid + off >= 1 && mid + off + 1 < n && uniform(mid + off)) return mid + off;
    }
    return std::nullopt;
}

const char* flag_name(ParticleFlag f) {
    switch (f) {
        case ParticleFlag::frozen: return "frozen";
        case ParticleFlag::exited: return "exited";
        default: return "ok";
    }
}

void write_trajectory_csv(const std::string& path, const TrajectoryEnsemble& ens) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("run: cannot open '" + path + "'");
    os << (ens.dims == 1 ? "particle_id,t,x,flag\n" : "particle_id,t,x,y,flag\n");
    char buf[160];
    std::size_t np = ens.positions.empty() ? 0 : ens.positions[0].size();
    for (std::size_t p = 0; p < np; ++p) {
        for (std::size_t t = 0; t < ens.times.size(); ++t) {
            const auto& x = ens.positions[t][p];
            if (ens.dims == 1)
                std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%s\n", p, ens.times[t], x[0],
                              flag_name(ens.flags[p]));
            else
                std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%s\n", p, ens.times[t], x[0],
                              x[1], flag_name(ens.flags[p]));
            os << buf;
        }
    }
}

void write_screen_csv(const std::string& path, const InterferenceReport& ir) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("run: cannot open '" + path + "'");
    os << "y,rho\n";
    char buf[96];
    for (std::size_t i = 0; i < ir.screen_coord.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", ir.screen_coord[i], ir.screen_rho[i]);
        os << buf;
    }
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
    RunReport rep;
    Warnings warn;
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output.directory);
    auto out = [&](const std::string& name) { return cfg.output.directory + "/" + name; };

    double t0 = now_seconds();
    Grid grid = build_grid(cfg.grid);
    WaveField psi0 = build_initial(grid, cfg.initial, cfg.units, &warn);
    Potential pot = build_potential(grid, cfg.potential);
    rep.lines.push_back("grid: " + std::to_string(cfg.grid.dims) + "D, " +
                        std::to_string(grid.points[0]) +
                        (cfg.grid.dims == 2 ? "x" + std::to_string(grid.points[1]) : "") + " points");
    rep.lines.push_back("initial: " + cfg.initial.type + ", potential: " + cfg.potential.kind);
    rep.lines.push_back(fmt("stage setup: %.3f s", now_seconds() - t0));

    t0 = now_seconds();
    EvolveResult ev = evolve(psi0, pot, cfg.evolve, &warn);
    const auto& snaps = ev.snapshots;
    std::vector<double> times(snaps.size());
    for (std::size_t i = 0; i < snaps.size(); ++i) times[i] = snaps[i].time;
    rep.lines.push_back(fmt("evolved %g steps of dt=%g, %g snapshots",
                            static_cast<double>(cfg.evolve.steps), cfg.evolve.dt,
                            static_cast<double>(snaps.size())));
    rep.lines.push_back(fmt("norm drift: %.3e", ev.max_norm_drift));
    if (!(ev.max_norm_drift < 1e-6))
        rep.failures.push_back(fmt("norm drift %.3e exceeds 1e-6", ev.max_norm_drift));
    rep.lines.push_back(fmt("stage evolve: %.3f s", now_seconds() - t0));

    if (cfg.diagnostics.residuals) {
        t0 = now_seconds();
        auto idx = pick_uniform_index(times);
        if (!idx) {
            rep.warnings.push_back("residuals skipped: need 3 evenly spaced snapshots");
        } else {
            ResidualOptions ropt;
            ResidualReport hr = hj_residual(snaps, pot, *idx, ropt);
            ResidualReport cr = continuity_residual(snaps, *idx, ropt);
            ResidualReport er = entropy_balance_residual(snaps, *idx, ropt);
            rep.lines.push_back(fmt("phase residual at t=%g: rms=%.3e", hr.time, hr.rms));
            rep.lines.push_back(fmt("continuity residual: rms=%.3e max=%.3e", cr.rms, cr.max_abs));
            rep.lines.push_back(fmt("entropy residual: rms=%.3e max=%.3e", er.rms, er.max_abs));
            for (const auto* r : {&hr, &cr, &er})
                if (!std::isfinite(r->rms) || !std::isfinite(r->max_abs))
                    rep.failures.push_back("residual field is not finite");
            // the entropy equation is an exact algebraic transform of the
            // continuity equation; their residuals must satisfy
            // r_S = -r_cont / (2 rho) to rounding
            BohmFields b = decompose(snaps[*idx]);
            double defect = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < b.rho.size(); ++i) {
                if (!cr.mask[i] || !er.mask[i]) continue;
                defect = std::max(defect, std::abs(er.field[i] + cr.field[i] / (2.0 * b.rho[i])));
                double terms = 0.5 * std::abs(b.div_v[i]);
                for (int a = 0; a < grid.dims; ++a)
                    terms += std::abs(b.v[a][i] * b.grad_S_Q[a][i]);
                scale = std::max(scale, terms + std::abs(er.field[i]));
            }
            rep.lines.push_back(fmt("entropy/continuity transform defect: %.3e", defect));
            if (!(defect <= 1e-10 * std::max(1.0, scale)))
                rep.failures.push_back(fmt("entropy residual is not the continuity transform "
                                           "(defect %.3e, scale %.3e)",
                                           defect, scale));
        }
        rep.lines.push_back(fmt("stage residuals: %.3f s", now_seconds() - t0));
    }

    if (cfg.initial.type == "harmonic_ground" && cfg.potential.kind == "harmonic" &&
        std::abs(cfg.initial.omega - cfg.potential.omega) < 1e-12) {
        const WaveField& last = snaps.back();
        RealField q = quantum_potential(last, QForm::curvature);
        RealField rho = density(last);
        double rmax = 0.0;
        for (double r : rho) rmax = std::max(rmax, r);
        double expected = 0.5 * cfg.units.hbar * cfg.potential.omega;
        double dev = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i)
            if (rho[i] > 1e-6 * rmax) dev = std::max(dev, std::abs(pot.values[i] + q[i] - expected));
        double tol = 1e-4 * std::max(1.0, cfg.units.hbar * cfg.potential.omega);
        rep.lines.push_back(fmt("U+Q constancy: max deviation %.3e from %.6g", dev, expected));
        if (!(dev < tol))
            rep.failures.push_back(fmt("U+Q deviates by %.3e (tolerance %.1e)", dev, tol));
    }

    if (cfg.diagnostics.circulation) {
        if (grid.dims != 2) {
            rep.warnings.push_back("circulation skipped: needs a 2D grid");
        } else {
            GridLoop loop{grid.points[0] / 4, grid.points[1] / 4, 3 * grid.points[0] / 4,
                          3 * grid.points[1] / 4};
            try {
                CirculationResult cres = circulation(snaps.back(), loop);
                rep.lines.push_back(
                    fmt("circulation: Gamma=%.6e, winding=%.6f", cres.gamma, cres.winding));
                if (!(std::abs(cres.winding - std::round(cres.winding)) < 1e-6))
                    rep.failures.push_back(fmt("circulation winding %.3e is not an integer",
                                               cres.winding));
            } catch (const std::exception& e) {
                rep.warnings.push_back(std::string("circulation skipped: ") + e.what());
            }
        }
    }

    if (cfg.diagnostics.probes) {
        auto idx = pick_uniform_index(times);
        if (!idx) {
            rep.warnings.push_back("probes skipped: need 3 evenly spaced snapshots");
        } else {
            // reported only; probe discrepancies never gate the exit code
            BohmFields b = decompose(snaps[*idx]);
            PhysicalConstants pc;
            ProbeReport p1 = taylor_probe_b1(b, pot, pc);
            ProbeReport p2 = taylor_probe_b2(b, pot, pc);
            DirectionRateReport dr = epsilon_dot_check(snaps, pc, *idx);
            double ndmax = 0.0;
            for (std::size_t i = 0; i < dr.n_dot_magnitude.size(); ++i)
                if (dr.mask[i]) ndmax = std::max(ndmax, dr.n_dot_magnitude[i]);
            rep.lines.push_back(fmt("probe b1: max discrepancy %.3e, correlation %.3f",
                                    p1.max_discrepancy, p1.correlation));
            rep.lines.push_back(fmt("probe b2: max discrepancy %.3e, correlation %.3f",
                                    p2.max_discrepancy, p2.correlation));
            rep.lines.push_back(fmt("direction rate: max |n_dot| %.3e", ndmax));
        }
    }

    if (cfg.trajectories.enabled) {
        t0 = now_seconds();
        auto initial = sample_initial(snaps.front(), cfg.trajectories.count, cfg.trajectories.seed);
        TrajectoryEnsemble ens = integrate(snaps, initial, cfg.trajectories.seed);
        std::size_t frozen = 0, exited = 0;
        for (ParticleFlag f : ens.flags) {
            frozen += f == ParticleFlag::frozen;
            exited += f == ParticleFlag::exited;
        }
        rep.lines.push_back(fmt("trajectories: %g particles, %g frozen, %g exited",
                                static_cast<double>(cfg.trajectories.count),
                                static_cast<double>(frozen), static_cast<double>(exited)));
        if (grid.dims == 1) {
            CrossingReport crs = crossing_check(ens);
            rep.lines.push_back(
                fmt("crossing violations: %g", static_cast<double>(crs.violations)));
        }
        if (cfg.output.write_csv) {
            write_trajectory_csv(out("trajectories.csv"), ens);
            record(rep, out("trajectories.csv"));
        }
        rep.lines.push_back(fmt("stage trajectories: %.3f s", now_seconds() - t0));
    }

    if (cfg.diagnostics.screen && grid.dims == 2) {
        FraunhoferGeometry geom;
        if (cfg.potential.kind == "two_slit") {
            geom.slit_separation =
                std::abs(cfg.potential.two_slit.slit_centers[1] - cfg.potential.two_slit.slit_centers[0]);
            geom.screen_distance = cfg.diagnostics.screen_x - cfg.potential.two_slit.wall_x;
            geom.packet_k = std::abs(cfg.initial.k[0]);
            geom.screen_center =
                0.5 * (cfg.potential.two_slit.slit_centers[0] + cfg.potential.two_slit.slit_centers[1]);
        }
        try {
            InterferenceReport ir = compare_simulated(snaps.back(), cfg.diagnostics.screen_x, geom);
            if (ir.predicted_spacing > 0.0)
                rep.lines.push_back(fmt("screen: fringe spacing %.4f vs predicted %.4f (%.2f%%)",
                                        ir.fringe_spacing, ir.predicted_spacing,
                                        100.0 * ir.spacing_error));
            else
                rep.lines.push_back(
                    fmt("screen: %g samples extracted", static_cast<double>(ir.screen_rho.size())));
            if (cfg.output.write_csv) {
                write_screen_csv(out("pattern.csv"), ir);
                record(rep, out("pattern.csv"));
            }
        } catch (const std::exception& e) {
            rep.warnings.push_back(std::string("screen extraction skipped: ") + e.what());
        }
    }

    if (cfg.units.system == "si_report") {
        PhysicalConstants pc;
        double s = slowness_constant(pc);
        rep.lines.push_back(fmt("slowness constant s = %.6e s/m", s));
        rep.lines.push_back(fmt("epsilon radius (electron) = %.6e m", epsilon_radius(pc.m_electron, pc)));
        rep.lines.push_back(fmt("epsilon radius (proton)   = %.6e m", epsilon_radius(pc.m_proton, pc)));
        rep.lines.push_back(fmt("epsilon radius (neutron)  = %.6e m", epsilon_radius(pc.m_neutron, pc)));
        rep.lines.push_back(fmt("s * c * alpha = %.12f", s * pc.c * pc.alpha));
    }

    write_text(out("config.txt"), emit_config(cfg));
    record(rep, out("config.txt"));
    if (cfg.output.write_fields) {
        write_field(out("initial.bohm"), snaps.front());
        record(rep, out("initial.bohm"));
        write_field(out("final.bohm"), snaps.back());
        record(rep, out("final.bohm"));
    }
    if (cfg.output.write_csv) {
        write_field_csv(out("final.csv"), snaps.back());
        record(rep, out("final.csv"));
    }

    rep.warnings.insert(rep.warnings.end(), warn.items.begin(), warn.items.end());
    rep.exit_code = rep.failures.empty() ? 0 : 2;
    write_text(out("report.txt"), format_report(rep));
    return rep;
}

std::string format_report(const RunReport& rep) {
    std::string s = "# run report\n";
    for (const auto& l : rep.lines) s += l + "\n";
    if (!rep.files.empty()) {
        s += "\nfiles:\n";
        char buf[512];
        for (const auto& f : rep.files) {
            std::snprintf(buf, sizeof(buf), "  %s crc32=%08x bytes=%llu\n", f.path.c_str(), f.crc32,
                          static_cast<unsigned long long>(f.bytes));
            s += buf;
        }
    }
    if (!rep.warnings.empty()) {
        s += "\nwarnings:\n";
        for (const auto& w : rep.warnings) s += "  " + w + "\n";
    }
    if (!rep.failures.empty()) {
        s += "\nfailures:\n";
        for (const auto& f : rep.failures) s += "  " + f + "\n";
    }
    s += "\nexit_code: " + std::to_string(rep.exit_code) + "\n";
    return s;
}

}  // namespace bohmlab
