#include "irmgl/reference.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace irmgl::reference {

namespace {

template <typename Visit>
void for_each_sample(const RadonGeometry& geom, Visit&& visit) {
  const std::size_t E = geom.image_size;
  const std::size_t d = geom.num_detectors();
  const double c = geom.center();
  for (std::size_t t = 0; t < geom.num_angles; ++t) {
    const double ct = std::cos(geom.angle(t));
    const double st = std::sin(geom.angle(t));
    for (std::size_t j = 0; j < d; ++j) {
      const double s = geom.detector_offset(j);
      for (std::size_t k = 0; k < geom.num_samples(); ++k) {
        const double tk = geom.sample_offset(k);
        visit(t * d + j, bilinear_stencil(c + s * st + tk * ct, c + s * ct - tk * st, E, E));
      }
    }
  }
}

}  // namespace

Sinogram radon_apply(const RadonGeometry& geom, const ImageGrid& u) {
  detail::require_same_shape(u.shape(), geom.image_shape(), "reference radon apply");
  Sinogram out(geom.sinogram_shape());
  for_each_sample(geom, [&](std::size_t ray, const BilinearStencil& st) {
    double v = 0.0;
    for (int q = 0; q < 4; ++q) v += st.weight[q] * u[st.index[q]];
    out[ray] += v;
  });
  return out;
}

ImageGrid radon_adjoint(const RadonGeometry& geom, const Sinogram& s) {
  detail::require_same_shape(s.shape(), geom.sinogram_shape(), "reference radon adjoint");
  ImageGrid out(geom.image_shape());
  for_each_sample(geom, [&](std::size_t ray, const BilinearStencil& st) {
    for (int q = 0; q < 4; ++q) out[st.index[q]] += st.weight[q] * s[ray];
  });
  return out;
}

namespace {

ImageGrid correlate_or_convolve(const BlurKernel& k, const ImageGrid& u, int sign) {
  const long H = static_cast<long>(u.rows());
  const long W = static_cast<long>(u.cols());
  const int r = k.radius;
  ImageGrid out(u.shape());
  for (long i = 0; i < H; ++i)
    for (long j = 0; j < W; ++j) {
      double acc = 0.0;
      for (int di = -r; di <= r; ++di)
        for (int dj = -r; dj <= r; ++dj) {
          const long ii = i - sign * di;
          const long jj = j - sign * dj;
          if (ii < 0 || jj < 0 || ii >= H || jj >= W) continue;
          acc += k.tap2d(di, dj) * u(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj));
        }
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = acc;
    }
  return out;
}

}  // namespace

ImageGrid blur_apply(const BlurKernel& k, const ImageGrid& u) { return correlate_or_convolve(k, u, 1); }

ImageGrid blur_adjoint(const BlurKernel& k, const ImageGrid& s) {
  return correlate_or_convolve(k, s, -1);
}

SparseLaplacian build_laplacian(const ImageGrid& u, const GraphConfig& cfg) {
  cfg.validate();
  const std::size_t H = u.rows();
  const std::size_t W = u.cols();
  std::vector<std::tuple<std::size_t, std::size_t, double>> coo;
  for (std::size_t ia = 0; ia < H; ++ia)
    for (std::size_t ja = 0; ja < W; ++ja)
      for (std::size_t ib = 0; ib < H; ++ib)
        for (std::size_t jb = 0; jb < W; ++jb) {
          const double di = std::abs(static_cast<double>(ia) - static_cast<double>(ib));
          const double dj = std::abs(static_cast<double>(ja) - static_cast<double>(jb));
          const double dist =
              cfg.metric == DistanceMetric::manhattan ? di + dj : std::max(di, dj);
          if (!(dist > 0.0 && dist <= cfg.radius)) continue;
          const double diff = u(ia, ja) - u(ib, jb);
          coo.emplace_back(ia * W + ja, ib * W + jb, std::exp(-(diff * diff) / cfg.sigma));
        }
  std::sort(coo.begin(), coo.end());
  std::vector<std::size_t> row_ptr(H * W + 1, 0), col;
  std::vector<double> weight;
  for (const auto& [i, j, w] : coo) {
    ++row_ptr[i + 1];
    col.push_back(j);
    weight.push_back(w);
  }
  for (std::size_t i = 0; i < H * W; ++i) row_ptr[i + 1] += row_ptr[i];
  return SparseLaplacian(u.shape(), std::move(row_ptr), std::move(col), std::move(weight));
}

ImageGrid laplacian_apply(const SparseLaplacian& L, const ImageGrid& x) {
  detail::require_same_shape(x.shape(), L.grid_shape(), "reference Laplacian apply");
  ImageGrid out(x.shape());
  const auto rp = L.row_ptr();
  const auto col = L.col();
  const auto w = L.weights();
  const auto deg = L.degrees();
  for (std::size_t i = 0; i < L.num_nodes(); ++i) {
    double wx = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) wx += w[k] * x[col[k]];
    out[i] = deg[i] * x[i] - wx;
  }
  return out;
}

}  // namespace irmgl::reference
