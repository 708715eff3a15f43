#pragma once

#include "irmgl/grid.hpp"

namespace irmgl {

// Forward map A from image space to a data space of type Range, together with its
// exact discrete transpose.
template <typename Range>
class LinearOperator {
 public:
  using range_type = Range;

  virtual ~LinearOperator() = default;

  virtual Shape domain_shape() const = 0;
  virtual Shape range_shape() const = 0;

  virtual Range apply(const ImageGrid& x) const = 0;
  virtual ImageGrid apply_adjoint(const Range& y) const = 0;
};

// c * I on images. Handy as a well-understood forward map.
class ScaledIdentity final : public LinearOperator<ImageGrid> {
 public:
  ScaledIdentity(Shape shape, double factor = 1.0) : shape_(shape), factor_(factor) {}

  Shape domain_shape() const override { return shape_; }
  Shape range_shape() const override { return shape_; }

  ImageGrid apply(const ImageGrid& x) const override {
    detail::require_same_shape(x.shape(), shape_, "ScaledIdentity::apply");
    return scale(factor_, x);
  }
  ImageGrid apply_adjoint(const ImageGrid& y) const override {
    detail::require_same_shape(y.shape(), shape_, "ScaledIdentity::apply_adjoint");
    return scale(factor_, y);
  }

 private:
  Shape shape_;
  double factor_;
};

}  // namespace irmgl
