#include "irmgl/blur.hpp"

#include <cmath>

namespace irmgl {

BlurKernel BlurKernel::gaussian(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("blur rho must be > 0");
  BlurKernel k;
  k.rho = rho;
  k.radius = static_cast<int>(std::ceil(4.0 * rho));
  k.taps.resize(static_cast<std::size_t>(2 * k.radius + 1));
  double mass = 0.0;
  for (int i = -k.radius; i <= k.radius; ++i) {
    const double v = std::exp(-static_cast<double>(i * i) / (2.0 * rho * rho));
    k.taps[static_cast<std::size_t>(i + k.radius)] = v;
    mass += v;
  }
  for (double& t : k.taps) t /= mass;
  // Exact mirror symmetry regardless of rounding in the loop above.
  for (int i = 1; i <= k.radius; ++i)
    k.taps[static_cast<std::size_t>(k.radius - i)] = k.taps[static_cast<std::size_t>(k.radius + i)];
  return k;
}

BlurOperator::BlurOperator(Shape shape, BlurKernel kernel)
    : shape_(shape), kernel_(std::move(kernel)) {
  if (shape_.size() == 0) throw DimensionError("BlurOperator: empty shape");
}

namespace {

// out(i, j) = sum_d taps[d] * in(i, j - d), zero outside.
void convolve_rows(const BlurKernel& k, const Shape& s, const double* in, double* out) {
  const long H = static_cast<long>(s.rows);
  const long W = static_cast<long>(s.cols);
  const long r = k.radius;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < H; ++i) {
    for (long j = 0; j < W; ++j) {
      double acc = 0.0;
      for (long d = -r; d <= r; ++d) {
        const long jj = j - d;
        if (jj >= 0 && jj < W) acc += k.taps[static_cast<std::size_t>(d + r)] * in[i * W + jj];
      }
      out[i * W + j] = acc;
    }
  }
}

// out(i, j) = sum_d taps[d] * in(i - d, j), zero outside.
void convolve_cols(const BlurKernel& k, const Shape& s, const double* in, double* out) {
  const long H = static_cast<long>(s.rows);
  const long W = static_cast<long>(s.cols);
  const long r = k.radius;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < H; ++i) {
    for (long j = 0; j < W; ++j) {
      double acc = 0.0;
      for (long d = -r; d <= r; ++d) {
        const long ii = i - d;
        if (ii >= 0 && ii < H) acc += k.taps[static_cast<std::size_t>(d + r)] * in[ii * W + j];
      }
      out[i * W + j] = acc;
    }
  }
}

}  // namespace

ImageGrid BlurOperator::apply(const ImageGrid& x) const {
  detail::require_same_shape(x.shape(), shape_, "blur apply");
  ImageGrid tmp(shape_), out(shape_);
  convolve_rows(kernel_, shape_, x.data(), tmp.data());
  convolve_cols(kernel_, shape_, tmp.data(), out.data());
  return out;
}

// The taps are symmetric, so each 1D zero-padded pass is its own transpose.
ImageGrid BlurOperator::apply_adjoint(const ImageGrid& y) const {
  detail::require_same_shape(y.shape(), shape_, "blur adjoint");
  ImageGrid tmp(shape_), out(shape_);
  convolve_cols(kernel_, shape_, y.data(), tmp.data());
  convolve_rows(kernel_, shape_, tmp.data(), out.data());
  return out;
}

}  // namespace irmgl
