#include "bohmlab/fieldio.hpp"

#include <zlib.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "field serialization assumes a little-endian host");

namespace bohmlab {

namespace {

constexpr char kMagic[5] = {'B', 'O', 'H', 'M', '1'};

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("read_field: truncated file");
    return v;
}

}  // namespace

void write_field(const std::string& path, const WaveField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_field: cannot open '" + path + "'");
    os.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.dims));
    for (int a = 0; a < f.grid.dims; ++a) {
        put<std::uint64_t>(os, f.grid.points[a]);
        put<double>(os, f.grid.min[a]);
        put<double>(os, f.grid.max[a]);
    }
    put<double>(os, f.time);
    put<double>(os, f.hbar);
    put<double>(os, f.mass);
    os.write(reinterpret_cast<const char*>(f.amp.data()),
             static_cast<std::streamsize>(f.amp.size() * sizeof(Complex)));
    if (!os) throw std::runtime_error("write_field: write failed for '" + path + "'");
}

WaveField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open '" + path + "'");
    char magic[sizeof(kMagic)];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("read_field: bad magic in '" + path + "'");
    auto dims = get<std::uint32_t>(is);
    if (dims != 1 && dims != 2) throw std::runtime_error("read_field: unsupported dims");
    std::array<double, 2> mn{0, 0}, mx{1, 1};
    std::array<std::size_t, 2> pts{0, 1};
    for (std::uint32_t a = 0; a < dims; ++a) {
        pts[a] = get<std::uint64_t>(is);
        mn[a] = get<double>(is);
        mx[a] = get<double>(is);
    }
    WaveField f;
    f.grid = make_grid(static_cast<int>(dims), mn, mx, pts);
    f.time = get<double>(is);
    f.hbar = get<double>(is);
    f.mass = get<double>(is);
    f.amp.resize(f.grid.size());
    is.read(reinterpret_cast<char*>(f.amp.data()),
            static_cast<std::streamsize>(f.amp.size() * sizeof(Complex)));
    if (!is) throw std::runtime_error("read_field: truncated data in '" + path + "'");
    return f;
}

void write_field_csv(const std::string& path, const WaveField& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_field_csv: cannot open '" + path + "'");
    char buf[160];
    if (f.grid.dims == 1) {
        os << "x,re,im\n";
        for (std::size_t i = 0; i < f.grid.points[0]; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", f.grid.coord(0, i),
                          f.amp[i].real(), f.amp[i].imag());
            os << buf;
        }
    } else {
        os << "x,y,re,im\n";
        for (std::size_t i = 0; i < f.grid.points[0]; ++i)
            for (std::size_t j = 0; j < f.grid.points[1]; ++j) {
                const Complex& z = f.amp[f.grid.index(i, j)];
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", f.grid.coord(0, i),
                              f.grid.coord(1, j), z.real(), z.imag());
                os << buf;
            }
    }
    if (!os) throw std::runtime_error("write_field_csv: write failed for '" + path + "'");
}

std::uint32_t crc32_bytes(const void* data, std::size_t n) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, static_cast<const Bytef*>(data), static_cast<uInt>(n)));
}

std::uint32_t crc32_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("crc32_file: cannot open '" + path + "'");
    std::vector<char> buf(1 << 16);
    uLong crc = ::crc32(0L, nullptr, 0);
    while (is) {
        is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        std::streamsize got = is.gcount();
        if (got > 0)
            crc = ::crc32(crc, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(got));
    }
    return static_cast<std::uint32_t>(crc);
}

std::uint64_t file_size(const std::string& path) {
    std::ifstream is(path, std::ios::binary | std::ios::ate);
    if (!is) throw std::runtime_error("file_size: cannot open '" + path + "'");
    return static_cast<std::uint64_t>(is.tellg());
}

}  // namespace bohmlab
