#pragma once
// Flat sectioned key-value experiment configuration.
//
// Format: "[section]" headers, "key = value" lines, '#' comments.  Unknown
// sections and keys are rejected with the line number; every resolved value
// (defaults included) appears in the emitted effective config, and floats
// are written with 17 significant digits so parse(emit(parse(t))) =
// parse(t) holds bit-exactly.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "bohmlab/evolve.hpp"
#include "bohmlab/potential.hpp"

namespace bohmlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    int dims = 1;
    std::array<double, 2> min{-20.0, -20.0};
    std::array<double, 2> max{20.0, 20.0};
    std::array<std::size_t, 2> points{513, 513};
};

struct InitialSpec {
    std::string type = "gaussian";  // gaussian | plane | harmonic_ground | vortex
    std::array<double, 2> center{0.0, 0.0};
    std::array<double, 2> sigma{1.0, 1.0};
    std::array<double, 2> k{0.0, 0.0};
    double omega = 1.0;  // harmonic_ground well frequency
};

struct TrajectorySpec {
    bool enabled = false;
    std::size_t count = 1000;
    std::uint64_t seed = 1;
};

struct DiagnosticsSpec {
    bool residuals = true;
    bool circulation = false;
    bool probes = false;
    bool screen = false;  // set by providing screen_x
    double screen_x = 0.0;
};

struct OutputSpec {
    std::string directory = "out";
    bool write_fields = true;
    bool write_csv = true;
};

struct UnitsSpec {
    std::string system = "natural";  // natural | si_report
    double hbar = 1.0;
    double mass = 1.0;
};

struct ExperimentConfig {
    GridSpec grid;
    InitialSpec initial;
    PotentialSpec potential;
    EvolutionPlan evolve;
    TrajectorySpec trajectories;
    DiagnosticsSpec diagnostics;
    OutputSpec output;
    UnitsSpec units;
};

ExperimentConfig parse_config(const std::string& text);
std::string emit_config(const ExperimentConfig& cfg);

Grid build_grid(const GridSpec& spec);
WaveField build_initial(const Grid& g, const InitialSpec& spec, const UnitsSpec& units,
                        Warnings* warn = nullptr);

}  // namespace bohmlab
