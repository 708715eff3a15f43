#include "irmgl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace irmgl {

double relative_error(const ImageGrid& u, const ImageGrid& truth) {
  const double t = norm(truth);
  if (t == 0.0) throw std::domain_error("relative_error: reference image is zero");
  return norm(sub(u, truth)) / t;
}

Psnr psnr(const ImageGrid& u, const ImageGrid& truth) {
  const double d = norm(sub(u, truth));
  Psnr p;
  if (d == 0.0) {
    p.identical = true;
    p.paper = p.standard = std::numeric_limits<double>::infinity();
    return p;
  }
  p.paper = 20.0 * std::log10(1.0 / d);
  p.standard = 20.0 * std::log10(std::sqrt(static_cast<double>(u.size())) / d);
  return p;
}

double ssim(const ImageGrid& u, const ImageGrid& truth, const SsimOptions& opt) {
  detail::require_same_shape(u.shape(), truth.shape(), "ssim");
  const std::size_t w = opt.window;
  if (u.rows() < w || u.cols() < w)
    throw ConfigError("ssim: image smaller than the " + std::to_string(w) + "x" +
                      std::to_string(w) + " window");
  const double c1 = (opt.k1 * opt.data_range) * (opt.k1 * opt.data_range);
  const double c2 = (opt.k2 * opt.data_range) * (opt.k2 * opt.data_range);
  const double np = static_cast<double>(w * w);
  const double cov_norm = np / (np - 1.0);

  ImageGrid a(u.shape()), b(u.shape());
  for (std::size_t k = 0; k < u.size(); ++k) {
    a[k] = std::clamp(u[k], 0.0, 1.0);
    b[k] = std::clamp(truth[k], 0.0, 1.0);
  }

  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + w <= u.rows(); ++i)
    for (std::size_t j = 0; j + w <= u.cols(); ++j) {
      double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
      for (std::size_t di = 0; di < w; ++di)
        for (std::size_t dj = 0; dj < w; ++dj) {
          const double x = a(i + di, j + dj);
          const double y = b(i + di, j + dj);
          sa += x;
          sb += y;
          saa += x * x;
          sbb += y * y;
          sab += x * y;
        }
      const double mx = sa / np, my = sb / np;
      const double vx = cov_norm * (saa / np - mx * mx);
      const double vy = cov_norm * (sbb / np - my * my);
      const double cxy = cov_norm * (sab / np - mx * my);
      const double num = (2.0 * mx * my + c1) * (2.0 * cxy + c2);
      const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
      total += num / den;
      ++count;
    }
  return total / static_cast<double>(count);
}

QualityReport evaluate_quality(const ImageGrid& u, const ImageGrid& truth) {
  const Psnr p = psnr(u, truth);
  return {relative_error(u, truth), p.paper, p.standard, ssim(u, truth)};
}

}  // namespace irmgl
