#pragma once

// Serial, straightforward versions of the parallel kernels. They share no code paths
// with the optimized versions beyond the geometry definitions and are kept for
// cross-checking and benchmarking.

#include "irmgl/blur.hpp"
#include "irmgl/graph.hpp"
#include "irmgl/radon.hpp"

namespace irmgl::reference {

// Ray marching without a precomputed matrix: gathers interpolated samples.
Sinogram radon_apply(const RadonGeometry& geom, const ImageGrid& u);
// Scatters each sample's interpolation weights back onto the image.
ImageGrid radon_adjoint(const RadonGeometry& geom, const Sinogram& s);

// Direct 2D zero-padded convolution with the outer-product kernel.
ImageGrid blur_apply(const BlurKernel& k, const ImageGrid& u);
// Direct 2D correlation, the transpose of blur_apply.
ImageGrid blur_adjoint(const BlurKernel& k, const ImageGrid& s);

// All-pairs scan with an explicit distance test, assembled through a sorted
// coordinate list.
SparseLaplacian build_laplacian(const ImageGrid& u, const GraphConfig& cfg);
// D x - W x.
ImageGrid laplacian_apply(const SparseLaplacian& L, const ImageGrid& x);

}  // namespace irmgl::reference
