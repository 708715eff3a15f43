#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>

#include "irmgl/grid.hpp"
#include "irmgl/linear_operator.hpp"
#include "irmgl/random.hpp"

namespace irmgl::test {

template <typename Tag = ImageTag>
Array2D<Tag> random_array(Shape s, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  const CounterRng rng(seed);
  Array2D<Tag> a(s);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = lo + (hi - lo) * rng.uniform(k);
  return a;
}

inline ImageGrid random_image(Shape s, std::uint64_t seed) { return random_array(s, seed); }

template <typename Tag>
Array2D<Tag> random_normal(Shape s, std::uint64_t seed) {
  const CounterRng rng(seed);
  Array2D<Tag> a(s);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = rng.normal(k);
  return a;
}

template <typename Tag>
Eigen::VectorXd to_eigen(const Array2D<Tag>& a) {
  return Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
}

template <typename Tag>
Array2D<Tag> from_eigen(Shape s, const Eigen::VectorXd& v) {
  return Array2D<Tag>(s.rows, s.cols, std::vector<double>(v.data(), v.data() + v.size()));
}

// Column j is A applied to the j-th unit image.
template <typename Range>
Eigen::MatrixXd dense_forward(const LinearOperator<Range>& A) {
  const Shape d = A.domain_shape();
  const Shape r = A.range_shape();
  Eigen::MatrixXd M(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t j = 0; j < d.size(); ++j) {
    ImageGrid e(d);
    e[j] = 1.0;
    M.col(static_cast<Eigen::Index>(j)) = to_eigen(A.apply(e));
  }
  return M;
}

template <typename Range>
Eigen::MatrixXd dense_adjoint(const LinearOperator<Range>& A) {
  const Shape d = A.domain_shape();
  const Shape r = A.range_shape();
  Eigen::MatrixXd M(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(r.size()));
  for (std::size_t j = 0; j < r.size(); ++j) {
    Range e(r);
    e[j] = 1.0;
    M.col(static_cast<Eigen::Index>(j)) = to_eigen(A.apply_adjoint(e));
  }
  return M;
}

template <typename Tag>
double max_abs_diff(const Array2D<Tag>& a, const Array2D<Tag>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("irmgl_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace irmgl::test
