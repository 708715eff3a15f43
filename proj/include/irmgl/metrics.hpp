#pragma once

#include "irmgl/grid.hpp"

namespace irmgl {

// ||u - truth|| / ||truth||
double relative_error(const ImageGrid& u, const ImageGrid& truth);

struct Psnr {
  double paper = 0.0;     // 20 log10(1 / ||diff||)
  double standard = 0.0;  // 20 log10(1 / RMSE), peak 1
  bool identical = false; // diff == 0; both values are +infinity
};

Psnr psnr(const ImageGrid& u, const ImageGrid& truth);

struct SsimOptions {
  std::size_t window = 7;
  double k1 = 0.01;
  double k2 = 0.03;
  double data_range = 1.0;
};

// Mean local SSIM over all windows lying fully inside the image, with a uniform window
// and sample (N - 1) variances. Inputs are clamped to [0, 1] first.
double ssim(const ImageGrid& u, const ImageGrid& truth, const SsimOptions& opt = {});

struct QualityReport {
  double re = 0.0;
  double psnr_paper = 0.0;
  double psnr_standard = 0.0;
  double ssim = 0.0;
};

QualityReport evaluate_quality(const ImageGrid& u, const ImageGrid& truth);

}  // namespace irmgl
