#pragma once

#include <cstddef>
#include <vector>

#include "irmgl/linear_operator.hpp"

namespace irmgl {

// Parallel-beam geometry on an E x E image with unit pixel spacing. Angles are uniform
// on [0, 2pi); detectors are unit spaced and centred, ceil(sqrt(2) E) of them so the
// array spans the image diagonal.
struct RadonGeometry {
  std::size_t image_size = 64;
  std::size_t num_angles = 30;

  std::size_t num_detectors() const;
  // Ray samples per line; unit steps over the same span as the detector array.
  std::size_t num_samples() const { return num_detectors(); }
  double angle(std::size_t t) const;
  double detector_offset(std::size_t j) const;
  double sample_offset(std::size_t k) const;
  double center() const { return (static_cast<double>(image_size) - 1.0) / 2.0; }

  Shape image_shape() const { return {image_size, image_size}; }
  Shape sinogram_shape() const { return {num_angles, num_detectors()}; }

  void validate() const;
};

// Bilinear interpolation weights of one sample point; corners outside the grid are
// reported with weight 0 and index 0.
struct BilinearStencil {
  std::size_t index[4];
  double weight[4];
};
BilinearStencil bilinear_stencil(double row, double col, std::size_t height, std::size_t width);

// Line through the grid centre with normal (cos t, sin t) at offset s, sampled in unit
// steps; each sample bilinearly interpolates the image. The sampled weights are merged
// per pixel into a compressed-row matrix, and the adjoint uses its exact transpose.
class RadonOperator final : public LinearOperator<Sinogram> {
 public:
  explicit RadonOperator(RadonGeometry geometry);

  const RadonGeometry& geometry() const { return geom_; }
  Shape domain_shape() const override { return geom_.image_shape(); }
  Shape range_shape() const override { return geom_.sinogram_shape(); }

  Sinogram apply(const ImageGrid& x) const override;
  ImageGrid apply_adjoint(const Sinogram& y) const override;

  std::size_t num_entries() const { return col_.size(); }

 private:
  RadonGeometry geom_;
  // rows = rays (angle-major), columns = pixels
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_;
  std::vector<double> val_;
  // transpose: rows = pixels, columns = rays
  std::vector<std::size_t> t_row_ptr_;
  std::vector<std::size_t> t_col_;
  std::vector<double> t_val_;
};

}  // namespace irmgl
