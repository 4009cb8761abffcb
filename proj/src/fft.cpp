#include "bohmlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace bohmlab::fft {

namespace {

// FFTW planning is not thread safe; execution with the new-array interface
// is.  Plans are cached per (nx, ny, sign) and never destroyed.
std::mutex plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int nx, int ny, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(nx, ny, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    // Planning with FFTW_ESTIMATE leaves the buffers untouched, but use a
    // scratch array anyway so cached plans never alias caller memory.
    std::vector<fftw_complex> scratch(static_cast<std::size_t>(nx) * (ny > 0 ? ny : 1));
    fftw_plan p;
    if (ny > 0)
        p = fftw_plan_dft_2d(nx, ny, scratch.data(), scratch.data(), sign, FFTW_ESTIMATE);
    else
        p = fftw_plan_dft_1d(nx, scratch.data(), scratch.data(), sign, FFTW_ESTIMATE);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    plan_cache[key] = p;
    return p;
}

void run(const Grid& g, const ComplexField& in, ComplexField& out, int sign) {
    std::size_t n = interior_size(g);
    if (in.size() != n) throw std::invalid_argument("fft: buffer is not interior-sized");
    out.resize(n);
    int nx = static_cast<int>(g.points[0] - 1);
    int ny = g.dims == 2 ? static_cast<int>(g.points[1] - 1) : 0;
    fftw_plan p = get_plan(nx, ny, sign);
    // in-place on a copy: fftw_complex has the same layout as std::complex<double>
    if (&out != &in) out = in;
    auto* buf = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(p, buf, buf);
    if (sign == FFTW_BACKWARD) {
        double s = 1.0 / static_cast<double>(n);
        for (auto& z : out) z *= s;
    }
}

}  // namespace

std::size_t interior_size(const Grid& g) {
    std::size_t n = g.points[0] - 1;
    if (g.dims == 2) n *= g.points[1] - 1;
    return n;
}

std::vector<double> wavenumbers(const Grid& g, int axis) {
    std::size_t m = g.points[axis] - 1;
    double dk = 2.0 * std::numbers::pi / g.span(axis);
    std::vector<double> k(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(i);
        if (i > m / 2) idx -= static_cast<std::ptrdiff_t>(m);
        k[i] = dk * static_cast<double>(idx);
    }
    return k;
}

ComplexField gather_interior(const Grid& g, const ComplexField& full) {
    if (full.size() != g.size()) throw std::invalid_argument("gather_interior: field size mismatch");
    std::size_t mx = g.points[0] - 1;
    if (g.dims == 1) return ComplexField(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(mx));
    std::size_t my = g.points[1] - 1;
    ComplexField out(mx * my);
    for (std::size_t i = 0; i < mx; ++i)
        for (std::size_t j = 0; j < my; ++j) out[i * my + j] = full[g.index(i, j)];
    return out;
}

void scatter_interior(const Grid& g, const ComplexField& interior, ComplexField& full) {
    if (interior.size() != interior_size(g)) throw std::invalid_argument("scatter_interior: buffer size mismatch");
    full.resize(g.size());
    std::size_t mx = g.points[0] - 1;
    if (g.dims == 1) {
        for (std::size_t i = 0; i < mx; ++i) full[i] = interior[i];
        full[mx] = interior[0];
        return;
    }
    std::size_t my = g.points[1] - 1;
    for (std::size_t i = 0; i < mx; ++i)
        for (std::size_t j = 0; j < my; ++j) full[g.index(i, j)] = interior[i * my + j];
    // wrap duplicated edges
    for (std::size_t j = 0; j < my; ++j) full[g.index(mx, j)] = full[g.index(0, j)];
    for (std::size_t i = 0; i <= mx; ++i) full[g.index(i, my)] = full[g.index(i, 0)];
}

void forward(const Grid& g, const ComplexField& in, ComplexField& out) { run(g, in, out, FFTW_FORWARD); }
void backward(const Grid& g, const ComplexField& in, ComplexField& out) { run(g, in, out, FFTW_BACKWARD); }

void forward_raw(std::vector<Complex>& buf) {
    if (buf.empty()) return;
    fftw_plan p = get_plan(static_cast<int>(buf.size()), 0, FFTW_FORWARD);
    auto* b = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(p, b, b);
}

void backward_raw(std::vector<Complex>& buf) {
    if (buf.empty()) return;
    fftw_plan p = get_plan(static_cast<int>(buf.size()), 0, FFTW_BACKWARD);
    auto* b = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(p, b, b);
    double s = 1.0 / static_cast<double>(buf.size());
    for (auto& z : buf) z *= s;
}

}  // namespace bohmlab::fft
