#pragma once
// End-to-end experiment pipeline: evolve, decompose, diagnostics,
// trajectories, exports, and a report of everything produced.

#include <cstdint>
#include <string>
#include <vector>

#include "bohmlab/config.hpp"

namespace bohmlab {

struct FileRecord {
    std::string path;
    std::uint32_t crc32 = 0;
    std::uint64_t bytes = 0;
};

struct RunReport {
    std::vector<std::string> lines;     // summary, one fact per line
    std::vector<FileRecord> files;      // everything written, with checksums
    std::vector<std::string> warnings;  // non-fatal conditions
    std::vector<std::string> failures;  // failed numerical assertions
    int exit_code = 0;                  // 0 ok, 2 when any assertion failed
};

// Executes the configured experiment and writes outputs (effective config,
// field snapshots, CSVs, report.txt) into the output directory. Numerical
// assertion failures are collected, not thrown; config and I/O problems
// propagate as exceptions.
RunReport run_experiment(const ExperimentConfig& cfg);

std::string format_report(const RunReport& rep);

}  // namespace bohmlab
