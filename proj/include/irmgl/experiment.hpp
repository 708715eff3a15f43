#pragma once

#include <filesystem>
#include <string>

#include "irmgl/metrics.hpp"
#include "irmgl/phantoms.hpp"
#include "irmgl/recon.hpp"
#include "irmgl/solver.hpp"

namespace irmgl {

enum class Problem { ct, deblur, laplacian_demo };
const char* to_string(Problem p);
Problem parse_problem(const std::string& name);

enum class DemoImage { example, constant };
const char* to_string(DemoImage d);
DemoImage parse_demo_image(const std::string& name);

struct ExperimentConfig {
  Problem problem = Problem::ct;
  std::size_t size = 64;
  std::size_t angles = 30;
  double rho = 1.5;
  DemoImage demo_image = DemoImage::example;
  ReconstructorSpec psi;
  NoiseSpec noise{0.05, 42};
  SolverParams solver;
  std::filesystem::path output_dir = "out";

  void validate() const;
};

struct RunOutcome {
  SolveResult result;
  QualityReport quality;
  double delta = 0.0;
};

// The 2x2 example image [[0.2, 0.3], [0.5, 0.1]] or its constant counterpart.
ImageGrid demo_image(DemoImage which);

// Each run writes trace.csv, recon.pgm, recon.csv, meta.txt and upserts its row of
// report.csv in config.output_dir. A DivergenceError propagates after the partial trace
// has been written.
RunOutcome run_ct(const ExperimentConfig& config);
RunOutcome run_deblur(const ExperimentConfig& config);
// Writes weights.csv (i,j,w triplets) and degrees.csv for the demo image.
SparseLaplacian run_laplacian_demo(const ExperimentConfig& config);

// key=value lines accepted back by the CLI's --config option.
std::string describe_config(const ExperimentConfig& config);

inline constexpr const char* kReportHeader =
    "psi,delta_rel,iterations,residual,re,psnr_standard,psnr_paper,ssim,constant_C,eta_floor,"
    "stop_reason";

}  // namespace irmgl
