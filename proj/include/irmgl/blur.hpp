#pragma once

#include <vector>

#include "irmgl/linear_operator.hpp"

namespace irmgl {

// Discrete Gaussian point spread function exp(-(x^2 + y^2) / (2 rho^2)), truncated to
// the square of half-width ceil(4 rho) and normalised to unit mass. The 2D kernel is the
// outer product of the 1D taps.
struct BlurKernel {
  double rho = 1.5;
  int radius = 0;
  std::vector<double> taps;  // length 2 * radius + 1, sums to 1

  static BlurKernel gaussian(double rho);

  double tap2d(int di, int dj) const { return taps[di + radius] * taps[dj + radius]; }
};

// Zero-padded convolution with a BlurKernel, applied separably (rows, then columns).
// The adjoint runs the two passes in the opposite order, which is the exact transpose.
class BlurOperator final : public LinearOperator<ImageGrid> {
 public:
  BlurOperator(Shape shape, BlurKernel kernel);

  const BlurKernel& kernel() const { return kernel_; }
  Shape domain_shape() const override { return shape_; }
  Shape range_shape() const override { return shape_; }

  ImageGrid apply(const ImageGrid& x) const override;
  ImageGrid apply_adjoint(const ImageGrid& y) const override;

 private:
  Shape shape_;
  BlurKernel kernel_;
};

}  // namespace irmgl
