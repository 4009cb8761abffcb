#pragma once
// Snapshot serialization and CSV emission.
//
// Binary layout (little-endian throughout):
//   magic "BOHM1", u32 dims, per axis { u64 points, f64 min, f64 max },
//   f64 time, f64 hbar, f64 mass, then points f64 pairs (re, im) in
//   row-major order with x outermost.

#include <cstdint>
#include <string>

#include "bohmlab/wavefield.hpp"

namespace bohmlab {

void write_field(const std::string& path, const WaveField& f);
WaveField read_field(const std::string& path);

// x[,y],re,im with a header line, 17 significant digits
void write_field_csv(const std::string& path, const WaveField& f);

std::uint32_t crc32_bytes(const void* data, std::size_t n);
std::uint32_t crc32_file(const std::string& path);
std::uint64_t file_size(const std::string& path);

}  // namespace bohmlab
