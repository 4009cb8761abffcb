#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "bohmlab/bohm.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

enum class ParticleFlag : std::uint8_t { ok = 0, frozen = 1, exited = 2 };

struct TrajectoryEnsemble {
    int dims = 1;
    std::vector<double> times;                                  // snapshot-aligned
    std::vector<std::vector<std::array<double, 2>>> positions;  // [time][particle]
    std::vector<ParticleFlag> flags;                            // final per-particle status
    std::uint64_t seed = 0;
};

// Draw positions from |psi|^2: inverse-CDF in 1D, rejection in 2D.
// Deterministic for a fixed seed across platforms.
std::vector<std::array<double, 2>> sample_initial(const WaveField& f, std::size_t count,
                                                  std::uint64_t seed);

// Velocity fields of a snapshot series, interpolated bilinearly in space and
// linearly in time.  Queries touching node-masked cells or leaving the grid
// return nullopt.
class VelocitySeries {
  public:
    explicit VelocitySeries(const std::vector<WaveField>& snaps, const DecomposeOptions& opt = {});
    std::optional<std::array<double, 2>> at(std::array<double, 2> pos, double t) const;
    double t_begin() const { return slices_.front().time; }
    double t_end() const { return slices_.back().time; }
    const Grid& grid() const { return grid_; }
    double max_speed(std::size_t slice) const;  // over masked points

  private:
    struct Slice {
        double time;
        std::array<RealField, 2> v;
        std::vector<std::uint8_t> mask;
    };
    std::optional<std::array<double, 2>> eval(const Slice& s, double x, double y) const;
    Grid grid_;
    int dims_;
    std::vector<Slice> slices_;
    friend TrajectoryEnsemble integrate(const std::vector<WaveField>&,
                                        const std::vector<std::array<double, 2>>&, std::uint64_t);
};

std::optional<std::array<double, 2>> velocity_at(const std::vector<WaveField>& snaps,
                                                 std::array<double, 2> pos, double t);

// Classic 4th-order one-step integration with CFL-style substeps between
// snapshots; particles hitting node regions freeze, particles leaving the
// grid are flagged exited.
TrajectoryEnsemble integrate(const std::vector<WaveField>& snaps,
                             const std::vector<std::array<double, 2>>& initial,
                             std::uint64_t seed = 0);

struct CrossingReport {
    std::size_t violations = 0;
    // (stored-time index, left particle id, right particle id) per violation,
    // capped at 100 entries
    std::vector<std::array<std::size_t, 3>> details;
};
CrossingReport crossing_check(const TrajectoryEnsemble& ens);

}  // namespace bohmlab
