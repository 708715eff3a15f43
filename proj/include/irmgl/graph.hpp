#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "irmgl/grid.hpp"

namespace irmgl {

enum class DistanceMetric { manhattan, chebyshev };

const char* to_string(DistanceMetric m);
DistanceMetric parse_metric(const std::string& name);

// Edge weight w(a,b) = 1{0 < dist(a,b) <= radius} * exp(-|u(a) - u(b)|^2 / sigma).
struct GraphConfig {
  double radius = 6.0;
  double sigma = 0.05;
  DistanceMetric metric = DistanceMetric::chebyshev;

  void validate() const;
};

// Upper bound on the number of neighbours of any pixel: (2r+1)^2 - 1 for chebyshev,
// 2r(r+1) for manhattan, with r = floor(radius).
std::size_t max_neighbors(double radius, DistanceMetric metric);

// Pixel offsets (di, dj) inside the radius, ordered so that the flat index i*width + j
// increases along the list for any width larger than the radius.
struct Offset {
  int di;
  int dj;
};
std::vector<Offset> neighbor_offsets(double radius, DistanceMetric metric);

// Graph Laplacian D - W of a pixel grid in compressed-row form. Column indices are
// strictly increasing within each row, and there are no diagonal entries.
class SparseLaplacian {
 public:
  // Degrees are computed as left-to-right row sums of the given weights.
  SparseLaplacian(Shape grid, std::vector<std::size_t> row_ptr, std::vector<std::size_t> col,
                  std::vector<double> weight);

  const Shape& grid_shape() const { return grid_; }
  std::size_t num_nodes() const { return degrees_.size(); }
  std::size_t num_entries() const { return col_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col() const { return col_; }
  std::span<const double> weights() const { return weight_; }
  std::span<const double> degrees() const { return degrees_; }

  std::size_t neighbor_count(std::size_t node) const {
    return row_ptr_[node + 1] - row_ptr_[node];
  }
  // 0 when (i, j) is not an edge.
  double weight(std::size_t i, std::size_t j) const;

  // (Lx)(a) = sum_b w(a,b) (x(a) - x(b)), parallel over nodes.
  ImageGrid apply(const ImageGrid& x) const;
  void apply(std::span<const double> x, std::span<double> out) const;

  // Recomputes every weight, and the degrees, from a new image on the same edge set.
  void reweight(const ImageGrid& u, double sigma);

  // Writes "i,j,w" rows sorted by (i, j) and one degree per line.
  void write_csv(const std::filesystem::path& triplets,
                 const std::filesystem::path& degrees) const;

 private:
  Shape grid_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_;
  std::vector<double> weight_;
  std::vector<double> degrees_;
};

SparseLaplacian build_laplacian(const ImageGrid& u, const GraphConfig& cfg);

// sup_t |d/dt exp(-t^2/sigma)| = sqrt(2/sigma) * exp(-1/2).
double kernel_lipschitz(double sigma);

// Constant H with ||L_{u'} u - L_u u|| <= H ||u|| ||u' - u|| for any two images on a
// height x width grid: H = 2 L_h (sqrt(N) + 1). N is the neighbour bound, capped by
// the largest neighbour count any pixel of that grid actually has.
double lipschitz_constant(const GraphConfig& cfg, std::size_t height, std::size_t width);

}  // namespace irmgl
