#pragma once

#include <vector>

#include "bohmlab/grid.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab::fft {

// DFT over the interior lattice: the leading points-1 samples per axis, with
// period span = max - min.  The duplicated endpoint sample is ignored on the
// way in and rewritten as the wrap image of the first sample on the way out.

// Signed wavenumbers 2*pi*m/span for the interior size of `axis`, FFTW order
// (0, 1, ..., n/2, -(n/2-1), ..., -1 for even n).
std::vector<double> wavenumbers(const Grid& g, int axis);

// out = DFT(in), unnormalized.  Interior-shaped buffers: size is the product
// of (points[a]-1) over axes.
void forward(const Grid& g, const ComplexField& interior_in, ComplexField& interior_out);
void backward(const Grid& g, const ComplexField& interior_in, ComplexField& interior_out);  // 1/N applied

// Gather/scatter between a full grid field (endpoint duplicated) and the
// interior-lattice buffer.  scatter repairs the duplicated endpoints.
ComplexField gather_interior(const Grid& g, const ComplexField& full);
void scatter_interior(const Grid& g, const ComplexField& interior, ComplexField& full);

// In-place DFT of a bare complex buffer of any length, no grid attached;
// backs dense linear convolutions via circulant embedding.
void forward_raw(std::vector<Complex>& buf);
void backward_raw(std::vector<Complex>& buf);  // 1/N applied

std::size_t interior_size(const Grid& g);

}  // namespace bohmlab::fft
