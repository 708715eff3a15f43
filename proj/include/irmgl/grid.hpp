#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "irmgl/errors.hpp"

namespace irmgl {

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

// Dense row-major 2D field of doubles. Element (i, j) lives at i * cols + j.
// The tag keeps image-space and data-space arrays from being mixed up.
template <typename Tag>
class Array2D {
 public:
  Array2D() = default;
  Array2D(std::size_t rows, std::size_t cols, double fill = 0.0)
      : shape_{rows, cols}, values_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw DimensionError("Array2D: empty shape");
  }
  explicit Array2D(Shape s, double fill = 0.0) : Array2D(s.rows, s.cols, fill) {}
  Array2D(std::size_t rows, std::size_t cols, std::vector<double> values)
      : shape_{rows, cols}, values_(std::move(values)) {
    if (rows == 0 || cols == 0) throw DimensionError("Array2D: empty shape");
    if (values_.size() != rows * cols)
      throw DimensionError("Array2D: value count does not match shape " + to_string(shape_));
  }

  const Shape& shape() const { return shape_; }
  std::size_t rows() const { return shape_.rows; }
  std::size_t cols() const { return shape_.cols; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * shape_.cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * shape_.cols + j]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Array2D&, const Array2D&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

struct ImageTag {};
struct SinogramTag {};

// Image-space field: phantoms, iterates, reconstructions.
using ImageGrid = Array2D<ImageTag>;
// Data-space field for CT: rows are projection angles, columns detector bins.
using Sinogram = Array2D<SinogramTag>;

namespace detail {
inline void require_same_shape(const Shape& a, const Shape& b, const char* op) {
  if (!(a == b))
    throw DimensionError(std::string(op) + ": shape mismatch " + to_string(a) + " vs " +
                         to_string(b));
}
}  // namespace detail

// Left-to-right sum over the flat array; the fixed order keeps traces reproducible.
inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

template <typename Tag>
double dot(const Array2D<Tag>& a, const Array2D<Tag>& b) {
  detail::require_same_shape(a.shape(), b.shape(), "dot");
  return dot(a.values(), b.values());
}

template <typename Tag>
double norm(const Array2D<Tag>& a) {
  return norm(a.values());
}

// y + alpha * x
template <typename Tag>
Array2D<Tag> axpy(double alpha, const Array2D<Tag>& x, const Array2D<Tag>& y) {
  detail::require_same_shape(x.shape(), y.shape(), "axpy");
  Array2D<Tag> out = y;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha * x[i];
  return out;
}

template <typename Tag>
void axpy_inplace(double alpha, const Array2D<Tag>& x, Array2D<Tag>& y) {
  detail::require_same_shape(x.shape(), y.shape(), "axpy");
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

template <typename Tag>
Array2D<Tag> scale(double alpha, const Array2D<Tag>& x) {
  Array2D<Tag> out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= alpha;
  return out;
}

template <typename Tag>
Array2D<Tag> add(const Array2D<Tag>& a, const Array2D<Tag>& b) {
  detail::require_same_shape(a.shape(), b.shape(), "add");
  Array2D<Tag> out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

template <typename Tag>
Array2D<Tag> sub(const Array2D<Tag>& a, const Array2D<Tag>& b) {
  detail::require_same_shape(a.shape(), b.shape(), "sub");
  Array2D<Tag> out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

}  // namespace irmgl
