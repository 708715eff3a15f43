#include "irmgl/radon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace irmgl {

std::size_t RadonGeometry::num_detectors() const {
  return static_cast<std::size_t>(std::ceil(std::numbers::sqrt2 * static_cast<double>(image_size)));
}

double RadonGeometry::angle(std::size_t t) const {
  return 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(num_angles);
}

double RadonGeometry::detector_offset(std::size_t j) const {
  return static_cast<double>(j) - (static_cast<double>(num_detectors()) - 1.0) / 2.0;
}

double RadonGeometry::sample_offset(std::size_t k) const {
  return static_cast<double>(k) - (static_cast<double>(num_samples()) - 1.0) / 2.0;
}

void RadonGeometry::validate() const {
  if (image_size == 0) throw ConfigError("Radon geometry: image size must be positive");
  if (num_angles == 0) throw ConfigError("Radon geometry: need at least one angle");
}

BilinearStencil bilinear_stencil(double row, double col, std::size_t height, std::size_t width) {
  BilinearStencil s{};
  const double r0 = std::floor(row);
  const double c0 = std::floor(col);
  const double fr = row - r0;
  const double fc = col - c0;
  const long i0 = static_cast<long>(r0);
  const long j0 = static_cast<long>(c0);
  const double wts[4] = {(1.0 - fr) * (1.0 - fc), (1.0 - fr) * fc, fr * (1.0 - fc), fr * fc};
  const long di[4] = {0, 0, 1, 1};
  const long dj[4] = {0, 1, 0, 1};
  for (int c = 0; c < 4; ++c) {
    const long i = i0 + di[c];
    const long j = j0 + dj[c];
    if (i >= 0 && j >= 0 && i < static_cast<long>(height) && j < static_cast<long>(width)) {
      s.index[c] = static_cast<std::size_t>(i) * width + static_cast<std::size_t>(j);
      s.weight[c] = wts[c];
    } else {
      s.index[c] = 0;
      s.weight[c] = 0.0;
    }
  }
  return s;
}

RadonOperator::RadonOperator(RadonGeometry geometry) : geom_(geometry) {
  geom_.validate();
  const std::size_t E = geom_.image_size;
  const std::size_t m = geom_.num_angles;
  const std::size_t d = geom_.num_detectors();
  const std::size_t K = geom_.num_samples();
  const std::size_t rays = m * d;
  const double c = geom_.center();

  // Each ray's merged (pixel, weight) list is built independently, then concatenated
  // in ray order so the layout does not depend on scheduling.
  std::vector<std::vector<std::pair<std::size_t, double>>> per_ray(rays);
  const auto nrays = static_cast<std::ptrdiff_t>(rays);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t rr = 0; rr < nrays; ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    const double theta = geom_.angle(r / d);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double s = geom_.detector_offset(r % d);
    auto& entries = per_ray[r];
    for (std::size_t k = 0; k < K; ++k) {
      const double t = geom_.sample_offset(k);
      const double x = s * ct - t * st;
      const double y = s * st + t * ct;
      const auto st4 = bilinear_stencil(c + y, c + x, E, E);
      for (int q = 0; q < 4; ++q)
        if (st4.weight[q] != 0.0) entries.emplace_back(st4.index[q], st4.weight[q]);
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (out > 0 && entries[out - 1].first == entries[i].first)
        entries[out - 1].second += entries[i].second;
      else
        entries[out++] = entries[i];
    }
    entries.resize(out);
    entries.shrink_to_fit();
  }

  row_ptr_.assign(rays + 1, 0);
  for (std::size_t r = 0; r < rays; ++r) row_ptr_[r + 1] = row_ptr_[r] + per_ray[r].size();
  col_.resize(row_ptr_.back());
  val_.resize(row_ptr_.back());
  for (std::size_t r = 0; r < rays; ++r) {
    std::size_t k = row_ptr_[r];
    for (const auto& [pix, w] : per_ray[r]) {
      col_[k] = pix;
      val_[k] = w;
      ++k;
    }
  }

  // Transpose by counting sort; rows of the transpose list rays in increasing order.
  const std::size_t n = E * E;
  t_row_ptr_.assign(n + 1, 0);
  for (std::size_t pix : col_) ++t_row_ptr_[pix + 1];
  for (std::size_t p = 0; p < n; ++p) t_row_ptr_[p + 1] += t_row_ptr_[p];
  t_col_.resize(col_.size());
  t_val_.resize(val_.size());
  std::vector<std::size_t> fill(t_row_ptr_.begin(), t_row_ptr_.end() - 1);
  for (std::size_t r = 0; r < rays; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const std::size_t slot = fill[col_[k]]++;
      t_col_[slot] = r;
      t_val_[slot] = val_[k];
    }
  }
}

namespace {

void csr_matvec(const std::vector<std::size_t>& row_ptr, const std::vector<std::size_t>& col,
                const std::vector<double>& val, const double* x, double* y, std::size_t rows) {
  const auto nrows = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < nrows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double acc = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
    y[i] = acc;
  }
}

}  // namespace

Sinogram RadonOperator::apply(const ImageGrid& x) const {
  detail::require_same_shape(x.shape(), domain_shape(), "radon apply");
  Sinogram out(range_shape());
  csr_matvec(row_ptr_, col_, val_, x.data(), out.data(), out.size());
  return out;
}

ImageGrid RadonOperator::apply_adjoint(const Sinogram& y) const {
  detail::require_same_shape(y.shape(), range_shape(), "radon adjoint");
  ImageGrid out(domain_shape());
  csr_matvec(t_row_ptr_, t_col_, t_val_, y.data(), out.data(), out.size());
  return out;
}

}  // namespace irmgl
