#include "bohmlab/derivatives.hpp"

#include <stdexcept>

#include "bohmlab/fft.hpp"

namespace bohmlab {

namespace {

// Applies a diagonal spectral multiplier built per mode from (kx, ky).
template <typename Mult>
ComplexField spectral_apply(const Grid& g, const ComplexField& f, Mult mult) {
    ComplexField interior = fft::gather_interior(g, f);
    ComplexField hat;
    fft::forward(g, interior, hat);
    auto kx = fft::wavenumbers(g, 0);
    if (g.dims == 1) {
        for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= mult(kx[i], 0.0);
    } else {
        auto ky = fft::wavenumbers(g, 1);
        std::size_t my = g.points[1] - 1;
        for (std::size_t i = 0; i < kx.size(); ++i)
            for (std::size_t j = 0; j < my; ++j) hat[i * my + j] *= mult(kx[i], ky[j]);
    }
    ComplexField interior_out;
    fft::backward(g, hat, interior_out);
    ComplexField out;
    fft::scatter_interior(g, interior_out, out);
    return out;
}

ComplexField stencil_gradient(const Grid& g, const ComplexField& f, int axis) {
    std::size_t mx = g.points[0] - 1;
    std::size_t my = g.dims == 2 ? g.points[1] - 1 : 1;
    ComplexField out(g.size());
    double inv2h = 1.0 / (2.0 * g.spacing[axis]);
    for (std::size_t i = 0; i < mx; ++i) {
        std::size_t ip = (i + 1) % mx, im = (i + mx - 1) % mx;
        for (std::size_t j = 0; j < my; ++j) {
            std::size_t jp = (j + 1) % my, jm = (j + my - 1) % my;
            Complex d = axis == 0 ? f[g.index(ip, j)] - f[g.index(im, j)]
                                  : f[g.index(i, jp)] - f[g.index(i, jm)];
            out[g.index(i, j)] = d * inv2h;
        }
    }
    for (std::size_t j = 0; j < my; ++j) out[g.index(mx, j)] = out[g.index(0, j)];
    if (g.dims == 2)
        for (std::size_t i = 0; i <= mx; ++i) out[g.index(i, my)] = out[g.index(i, 0)];
    return out;
}

ComplexField stencil_laplacian(const Grid& g, const ComplexField& f) {
    std::size_t mx = g.points[0] - 1;
    std::size_t my = g.dims == 2 ? g.points[1] - 1 : 1;
    ComplexField out(g.size());
    double ihx2 = 1.0 / (g.spacing[0] * g.spacing[0]);
    double ihy2 = g.dims == 2 ? 1.0 / (g.spacing[1] * g.spacing[1]) : 0.0;
    for (std::size_t i = 0; i < mx; ++i) {
        std::size_t ip = (i + 1) % mx, im = (i + mx - 1) % mx;
        for (std::size_t j = 0; j < my; ++j) {
            Complex acc = (f[g.index(ip, j)] - 2.0 * f[g.index(i, j)] + f[g.index(im, j)]) * ihx2;
            if (g.dims == 2) {
                std::size_t jp = (j + 1) % my, jm = (j + my - 1) % my;
                acc += (f[g.index(i, jp)] - 2.0 * f[g.index(i, j)] + f[g.index(i, jm)]) * ihy2;
            }
            out[g.index(i, j)] = acc;
        }
    }
    for (std::size_t j = 0; j < my; ++j) out[g.index(mx, j)] = out[g.index(0, j)];
    if (g.dims == 2)
        for (std::size_t i = 0; i <= mx; ++i) out[g.index(i, my)] = out[g.index(i, 0)];
    return out;
}

RealField real_part(const ComplexField& f) {
    RealField out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
    return out;
}

ComplexField promote(const RealField& f) {
    ComplexField out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = Complex(f[i], 0.0);
    return out;
}

}  // namespace

ComplexField gradient(const Grid& g, const ComplexField& f, int axis, Deriv d) {
    if (axis < 0 || axis >= g.dims) throw std::invalid_argument("gradient: axis out of range");
    if (f.size() != g.size()) throw std::invalid_argument("gradient: field size mismatch");
    if (d == Deriv::central2) return stencil_gradient(g, f, axis);
    return spectral_apply(g, f, [axis](double kx, double ky) {
        return Complex(0.0, axis == 0 ? kx : ky);
    });
}

ComplexField laplacian(const Grid& g, const ComplexField& f, Deriv d) {
    if (f.size() != g.size()) throw std::invalid_argument("laplacian: field size mismatch");
    if (d == Deriv::central2) return stencil_laplacian(g, f);
    return spectral_apply(g, f, [](double kx, double ky) {
        return Complex(-(kx * kx + ky * ky), 0.0);
    });
}

RealField gradient(const Grid& g, const RealField& f, int axis, Deriv d) {
    return real_part(gradient(g, promote(f), axis, d));
}

RealField laplacian(const Grid& g, const RealField& f, Deriv d) {
    return real_part(laplacian(g, promote(f), d));
}

}  // namespace bohmlab
