#include "irmgl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "irmgl/io.hpp"

namespace irmgl {

const char* to_string(DistanceMetric m) {
  return m == DistanceMetric::manhattan ? "manhattan" : "chebyshev";
}

DistanceMetric parse_metric(const std::string& name) {
  if (name == "manhattan") return DistanceMetric::manhattan;
  if (name == "chebyshev") return DistanceMetric::chebyshev;
  throw ConfigError("unknown distance metric '" + name + "'");
}

void GraphConfig::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("graph radius must be > 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("graph sigma must be > 0");
}

std::size_t max_neighbors(double radius, DistanceMetric metric) {
  const auto r = static_cast<std::size_t>(std::floor(radius));
  if (metric == DistanceMetric::chebyshev) return (2 * r + 1) * (2 * r + 1) - 1;
  return 2 * r * (r + 1);
}

std::vector<Offset> neighbor_offsets(double radius, DistanceMetric metric) {
  const int r = static_cast<int>(std::floor(radius));
  std::vector<Offset> out;
  for (int di = -r; di <= r; ++di) {
    for (int dj = -r; dj <= r; ++dj) {
      if (di == 0 && dj == 0) continue;
      const int dist = metric == DistanceMetric::chebyshev ? std::max(std::abs(di), std::abs(dj))
                                                           : std::abs(di) + std::abs(dj);
      if (dist <= r) out.push_back({di, dj});
    }
  }
  return out;
}

SparseLaplacian::SparseLaplacian(Shape grid, std::vector<std::size_t> row_ptr,
                                 std::vector<std::size_t> col, std::vector<double> weight)
    : grid_(grid), row_ptr_(std::move(row_ptr)), col_(std::move(col)), weight_(std::move(weight)) {
  const std::size_t n = grid_.size();
  if (row_ptr_.size() != n + 1 || row_ptr_.front() != 0 || row_ptr_.back() != col_.size() ||
      col_.size() != weight_.size())
    throw DimensionError("SparseLaplacian: inconsistent compressed-row arrays");
  degrees_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_[k] >= n || col_[k] == i) throw DimensionError("SparseLaplacian: bad column index");
      d += weight_[k];
    }
    degrees_[i] = d;
  }
}

void SparseLaplacian::reweight(const ImageGrid& u, double sigma) {
  detail::require_same_shape(u.shape(), grid_, "Laplacian reweight");
  if (!(sigma > 0.0)) throw ConfigError("graph sigma must be > 0");
  const double* val = u.data();
  const auto nn = static_cast<std::ptrdiff_t>(num_nodes());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ai = 0; ai < nn; ++ai) {
    const auto a = static_cast<std::size_t>(ai);
    double d = 0.0;
    for (std::size_t k = row_ptr_[a]; k < row_ptr_[a + 1]; ++k) {
      const double diff = val[a] - val[col_[k]];
      weight_[k] = std::exp(-(diff * diff) / sigma);
      d += weight_[k];
    }
    degrees_[a] = d;
  }
}

double SparseLaplacian::weight(std::size_t i, std::size_t j) const {
  const auto first = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return weight_[static_cast<std::size_t>(it - col_.begin())];
}

void SparseLaplacian::apply(std::span<const double> x, std::span<double> out) const {
  const std::size_t n = num_nodes();
  if (x.size() != n || out.size() != n) throw DimensionError("Laplacian apply: shape mismatch");
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < nn; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double xi = x[i];
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += weight_[k] * (xi - x[col_[k]]);
    out[i] = acc;
  }
}

ImageGrid SparseLaplacian::apply(const ImageGrid& x) const {
  detail::require_same_shape(x.shape(), grid_, "Laplacian apply");
  ImageGrid out(grid_);
  apply(x.values(), out.values());
  return out;
}

void SparseLaplacian::write_csv(const std::filesystem::path& triplets,
                                const std::filesystem::path& degrees) const {
  std::ofstream t(triplets);
  std::ofstream d(degrees);
  if (!t || !d) throw std::runtime_error("cannot write Laplacian dump");
  t << "i,j,w\n";
  for (std::size_t i = 0; i < num_nodes(); ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      t << i << ',' << col_[k] << ',' << format_double(weight_[k]) << '\n';
  d << "i,degree\n";
  for (std::size_t i = 0; i < num_nodes(); ++i) d << i << ',' << format_double(degrees_[i]) << '\n';
}

SparseLaplacian build_laplacian(const ImageGrid& u, const GraphConfig& cfg) {
  cfg.validate();
  const auto offsets = neighbor_offsets(cfg.radius, cfg.metric);
  const auto h = static_cast<long>(u.rows());
  const auto w = static_cast<long>(u.cols());
  const std::size_t n = u.size();

  auto inside = [&](long i, long j) { return i >= 0 && i < h && j >= 0 && j < w; };

  // Pass 1: per-node neighbour counts fix the row layout independently of threading.
  std::vector<std::size_t> row_ptr(n + 1, 0);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < h; ++i) {
    for (long j = 0; j < w; ++j) {
      std::size_t c = 0;
      for (const auto& o : offsets) c += inside(i + o.di, j + o.dj) ? 1 : 0;
      row_ptr[static_cast<std::size_t>(i * w + j) + 1] = c;
    }
  }
  for (std::size_t k = 0; k < n; ++k) row_ptr[k + 1] += row_ptr[k];

  std::vector<std::size_t> col(row_ptr.back());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < h; ++i) {
    for (long j = 0; j < w; ++j) {
      std::size_t k = row_ptr[static_cast<std::size_t>(i * w + j)];
      for (const auto& o : offsets) {
        const long bi = i + o.di;
        const long bj = j + o.dj;
        if (inside(bi, bj)) col[k++] = static_cast<std::size_t>(bi * w + bj);
      }
    }
  }
  std::vector<double> weight(col.size(), 0.0);
  SparseLaplacian L(u.shape(), std::move(row_ptr), std::move(col), std::move(weight));
  L.reweight(u, cfg.sigma);
  return L;
}

double kernel_lipschitz(double sigma) { return std::sqrt(2.0 / sigma) * std::exp(-0.5); }

double lipschitz_constant(const GraphConfig& cfg, std::size_t height, std::size_t width) {
  cfg.validate();
  // The pixel nearest the centre has the most neighbours inside the grid.
  const long ci = static_cast<long>(height - 1) / 2;
  const long cj = static_cast<long>(width - 1) / 2;
  std::size_t fitting = 0;
  for (const auto& o : neighbor_offsets(cfg.radius, cfg.metric))
    if (ci + o.di >= 0 && ci + o.di < static_cast<long>(height) && cj + o.dj >= 0 &&
        cj + o.dj < static_cast<long>(width))
      ++fitting;
  const auto bound = std::min(fitting, max_neighbors(cfg.radius, cfg.metric));
  return 2.0 * kernel_lipschitz(cfg.sigma) * (std::sqrt(static_cast<double>(bound)) + 1.0);
}

}  // namespace irmgl
