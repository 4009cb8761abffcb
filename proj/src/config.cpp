#include "bohmlab/config.hpp"

#include <cctype>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include "bohmlab/util.hpp"

namespace bohmlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(std::size_t line, const std::string& key, const std::string& v) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
        fail(line, "value for '" + key + "' is not a number");
    return x;
}

long long parse_int(std::size_t line, const std::string& key, const std::string& v) {
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty())
        fail(line, "value for '" + key + "' is not an integer");
    return x;
}

bool parse_bool(std::size_t line, const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(line, "value for '" + key + "' is not a boolean (true/false)");
}

void check(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;

    using Setter = std::function<void(std::size_t, const std::string&, const std::string&)>;
    std::map<std::string, std::map<std::string, Setter>> table;

    auto dbl = [](double& slot) {
        return [&slot](std::size_t ln, const std::string& k, const std::string& v) {
            slot = parse_double(ln, k, v);
        };
    };
    auto uint = [](std::size_t& slot) {
        return [&slot](std::size_t ln, const std::string& k, const std::string& v) {
            long long x = parse_int(ln, k, v);
            if (x < 0) fail(ln, "value for '" + k + "' must be non-negative");
            slot = static_cast<std::size_t>(x);
        };
    };
    auto boolean = [](bool& slot) {
        return [&slot](std::size_t ln, const std::string& k, const std::string& v) {
            slot = parse_bool(ln, k, v);
        };
    };
    auto str = [](std::string& slot) {
        return [&slot](std::size_t, const std::string&, const std::string& v) { slot = v; };
    };

    table["grid"] = {
        {"dims",
         [&cfg](std::size_t ln, const std::string& k, const std::string& v) {
             cfg.grid.dims = static_cast<int>(parse_int(ln, k, v));
         }},
        {"x_min", dbl(cfg.grid.min[0])},
        {"x_max", dbl(cfg.grid.max[0])},
        {"x_points", uint(cfg.grid.points[0])},
        {"y_min", dbl(cfg.grid.min[1])},
        {"y_max", dbl(cfg.grid.max[1])},
        {"y_points", uint(cfg.grid.points[1])},
    };
    table["initial"] = {
        {"type", str(cfg.initial.type)},
        {"center_x", dbl(cfg.initial.center[0])},
        {"center_y", dbl(cfg.initial.center[1])},
        {"sigma_x", dbl(cfg.initial.sigma[0])},
        {"sigma_y", dbl(cfg.initial.sigma[1])},
        {"k_x", dbl(cfg.initial.k[0])},
        {"k_y", dbl(cfg.initial.k[1])},
        {"omega", dbl(cfg.initial.omega)},
    };
    table["potential"] = {
        {"type", str(cfg.potential.kind)},
        {"omega", dbl(cfg.potential.omega)},
        {"center_x", dbl(cfg.potential.center[0])},
        {"center_y", dbl(cfg.potential.center[1])},
        {"wall_x", dbl(cfg.potential.two_slit.wall_x)},
        {"thickness", dbl(cfg.potential.two_slit.thickness)},
        {"height", dbl(cfg.potential.two_slit.height)},
        {"slit_y1", dbl(cfg.potential.two_slit.slit_centers[0])},
        {"slit_y2", dbl(cfg.potential.two_slit.slit_centers[1])},
        {"slit_width", dbl(cfg.potential.two_slit.slit_width)},
        {"ramp_cells", dbl(cfg.potential.two_slit.ramp_cells)},
    };
    table["evolve"] = {
        {"dt", dbl(cfg.evolve.dt)},
        {"steps",
         [&cfg](std::size_t ln, const std::string& k, const std::string& v) {
             cfg.evolve.steps = parse_int(ln, k, v);
         }},
        {"snapshot_stride",
         [&cfg](std::size_t ln, const std::string& k, const std::string& v) {
             cfg.evolve.snapshot_stride = parse_int(ln, k, v);
         }},
    };
    table["trajectories"] = {
        {"enabled", boolean(cfg.trajectories.enabled)},
        {"count", uint(cfg.trajectories.count)},
        {"seed",
         [&cfg](std::size_t ln, const std::string& k, const std::string& v) {
             long long x = parse_int(ln, k, v);
             if (x < 0) fail(ln, "value for '" + k + "' must be non-negative");
             cfg.trajectories.seed = static_cast<std::uint64_t>(x);
         }},
    };
    table["diagnostics"] = {
        {"residuals", boolean(cfg.diagnostics.residuals)},
        {"circulation", boolean(cfg.diagnostics.circulation)},
        {"probes", boolean(cfg.diagnostics.probes)},
        {"screen_x",
         [&cfg](std::size_t ln, const std::string& k, const std::string& v) {
             cfg.diagnostics.screen_x = parse_double(ln, k, v);
             cfg.diagnostics.screen = true;
         }},
    };
    table["output"] = {
        {"directory", str(cfg.output.directory)},
        {"write_fields", boolean(cfg.output.write_fields)},
        {"write_csv", boolean(cfg.output.write_csv)},
    };
    table["units"] = {
        {"system", str(cfg.units.system)},
        {"hbar", dbl(cfg.units.hbar)},
        {"mass", dbl(cfg.units.mass)},
    };

    std::istringstream is(text);
    std::string raw;
    std::string section;
    std::size_t ln = 0;
    while (std::getline(is, raw)) {
        ++ln;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(ln, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!table.count(section)) fail(ln, "unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(ln, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty()) fail(ln, "key '" + key + "' appears before any section header");
        auto& keys = table[section];
        auto it = keys.find(key);
        if (it == keys.end()) fail(ln, "unknown key '" + key + "' in section [" + section + "]");
        it->second(ln, key, value);
    }

    // cross-field invariants, each naming the offending key
    check(cfg.grid.dims == 1 || cfg.grid.dims == 2, "key 'dims' must be 1 or 2");
    for (int a = 0; a < cfg.grid.dims; ++a) {
        const char* mn = a == 0 ? "x_min" : "y_min";
        const char* pt = a == 0 ? "x_points" : "y_points";
        check(cfg.grid.max[a] > cfg.grid.min[a],
              std::string("key '") + mn + "' must lie below the axis maximum");
        check(cfg.grid.points[a] >= 8, std::string("key '") + pt + "' must be at least 8");
    }
    check(cfg.initial.type == "gaussian" || cfg.initial.type == "plane" ||
              cfg.initial.type == "harmonic_ground" || cfg.initial.type == "vortex",
          "key 'type' in [initial] must be gaussian, plane, harmonic_ground, or vortex");
    check(cfg.initial.sigma[0] > 0.0, "key 'sigma_x' must be positive");
    check(cfg.initial.sigma[1] > 0.0, "key 'sigma_y' must be positive");
    check(cfg.initial.omega > 0.0, "key 'omega' in [initial] must be positive");
    check(cfg.potential.kind == "free" || cfg.potential.kind == "harmonic" ||
              cfg.potential.kind == "two_slit",
          "key 'type' in [potential] must be free, harmonic, or two_slit");
    check(cfg.potential.omega > 0.0, "key 'omega' in [potential] must be positive");
    check(cfg.potential.two_slit.slit_width > 0.0, "key 'slit_width' must be positive");
    check(cfg.potential.two_slit.thickness > 0.0, "key 'thickness' must be positive");
    check(cfg.potential.two_slit.height >= 0.0, "key 'height' must be non-negative");
    check(cfg.potential.two_slit.ramp_cells >= 0.0, "key 'ramp_cells' must be non-negative");
    check(cfg.evolve.dt > 0.0, "key 'dt' must be positive");
    check(cfg.evolve.steps >= 1, "key 'steps' must be at least 1");
    check(cfg.evolve.snapshot_stride >= 1, "key 'snapshot_stride' must be at least 1");
    check(!cfg.trajectories.enabled || cfg.trajectories.count >= 1,
          "key 'count' must be at least 1 when trajectories are enabled");
    check(cfg.units.system == "natural" || cfg.units.system == "si_report",
          "key 'system' must be natural or si_report");
    check(cfg.units.hbar > 0.0, "key 'hbar' must be positive");
    check(cfg.units.mass > 0.0, "key 'mass' must be positive");
    check(!cfg.output.directory.empty(), "key 'directory' must not be empty");

    cfg.potential.mass = cfg.units.mass;
    return cfg;
}

std::string emit_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "[grid]\n";
    os << "dims = " << cfg.grid.dims << "\n";
    os << "x_min = " << g17(cfg.grid.min[0]) << "\n";
    os << "x_max = " << g17(cfg.grid.max[0]) << "\n";
    os << "x_points = " << cfg.grid.points[0] << "\n";
    if (cfg.grid.dims == 2) {
        os << "y_min = " << g17(cfg.grid.min[1]) << "\n";
        os << "y_max = " << g17(cfg.grid.max[1]) << "\n";
        os << "y_points = " << cfg.grid.points[1] << "\n";
    }
    os << "\n[initial]\n";
    os << "type = " << cfg.initial.type << "\n";
    os << "center_x = " << g17(cfg.initial.center[0]) << "\n";
    os << "center_y = " << g17(cfg.initial.center[1]) << "\n";
    os << "sigma_x = " << g17(cfg.initial.sigma[0]) << "\n";
    os << "sigma_y = " << g17(cfg.initial.sigma[1]) << "\n";
    os << "k_x = " << g17(cfg.initial.k[0]) << "\n";
    os << "k_y = " << g17(cfg.initial.k[1]) << "\n";
    os << "omega = " << g17(cfg.initial.omega) << "\n";
    os << "\n[potential]\n";
    os << "type = " << cfg.potential.kind << "\n";
    os << "omega = " << g17(cfg.potential.omega) << "\n";
    os << "center_x = " << g17(cfg.potential.center[0]) << "\n";
    os << "center_y = " << g17(cfg.potential.center[1]) << "\n";
    os << "wall_x = " << g17(cfg.potential.two_slit.wall_x) << "\n";
    os << "thickness = " << g17(cfg.potential.two_slit.thickness) << "\n";
    os << "height = " << g17(cfg.potential.two_slit.height) << "\n";
    os << "slit_y1 = " << g17(cfg.potential.two_slit.slit_centers[0]) << "\n";
    os << "slit_y2 = " << g17(cfg.potential.two_slit.slit_centers[1]) << "\n";
    os << "slit_width = " << g17(cfg.potential.two_slit.slit_width) << "\n";
    os << "ramp_cells = " << g17(cfg.potential.two_slit.ramp_cells) << "\n";
    os << "\n[evolve]\n";
    os << "dt = " << g17(cfg.evolve.dt) << "\n";
    os << "steps = " << cfg.evolve.steps << "\n";
    os << "snapshot_stride = " << cfg.evolve.snapshot_stride << "\n";
    os << "\n[trajectories]\n";
    os << "enabled = " << (cfg.trajectories.enabled ? "true" : "false") << "\n";
    os << "count = " << cfg.trajectories.count << "\n";
    os << "seed = " << cfg.trajectories.seed << "\n";
    os << "\n[diagnostics]\n";
    os << "residuals = " << (cfg.diagnostics.residuals ? "true" : "false") << "\n";
    os << "circulation = " << (cfg.diagnostics.circulation ? "true" : "false") << "\n";
    os << "probes = " << (cfg.diagnostics.probes ? "true" : "false") << "\n";
    if (cfg.diagnostics.screen) os << "screen_x = " << g17(cfg.diagnostics.screen_x) << "\n";
    os << "\n[output]\n";
    os << "directory = " << cfg.output.directory << "\n";
    os << "write_fields = " << (cfg.output.write_fields ? "true" : "false") << "\n";
    os << "write_csv = " << (cfg.output.write_csv ? "true" : "false") << "\n";
    os << "\n[units]\n";
    os << "system = " << cfg.units.system << "\n";
    os << "hbar = " << g17(cfg.units.hbar) << "\n";
    os << "mass = " << g17(cfg.units.mass) << "\n";
    return os.str();
}

Grid build_grid(const GridSpec& spec) {
    return make_grid(spec.dims, spec.min, spec.max, spec.points);
}

WaveField build_initial(const Grid& g, const InitialSpec& spec, const UnitsSpec& units,
                        Warnings* warn) {
    if (spec.type == "gaussian") {
        GaussianSpec gs;
        gs.center = spec.center;
        gs.sigma = spec.sigma;
        gs.k = spec.k;
        return gaussian_packet(g, gs, units.hbar, units.mass, warn);
    }
    if (spec.type == "plane") return plane_wave(g, spec.k, units.hbar, units.mass, warn);
    if (spec.type == "harmonic_ground")
        return harmonic_ground(g, spec.omega, spec.center, units.hbar, units.mass, warn);
    if (spec.type == "vortex")
        return vortex_packet(g, spec.center, spec.sigma[0], units.hbar, units.mass, warn);
    throw ConfigError("key 'type' in [initial] must be gaussian, plane, harmonic_ground, or vortex");
}

}  // namespace bohmlab
