#pragma once

#include "bohmlab/grid.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

// Derivative backend.  Both assume the periodic interior-lattice convention;
// central2 is the second-order stencil used for convergence cross-checks.
enum class Deriv { spectral, central2 };

ComplexField gradient(const Grid& g, const ComplexField& f, int axis, Deriv d = Deriv::spectral);
ComplexField laplacian(const Grid& g, const ComplexField& f, Deriv d = Deriv::spectral);
RealField gradient(const Grid& g, const RealField& f, int axis, Deriv d = Deriv::spectral);
RealField laplacian(const Grid& g, const RealField& f, Deriv d = Deriv::spectral);

}  // namespace bohmlab
