// irmgl: batch runs of the graph-Laplacian iterative reconstruction experiments.
//
// Exit codes: 0 success, 2 configuration error, 3 divergence.

#include <CLI11.hpp>

#include <iostream>

#include "irmgl/experiment.hpp"
#include "irmgl/io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

void print_summary(const irmgl::ExperimentConfig& cfg, const irmgl::RunOutcome& out) {
  const auto& r = out.result;
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << irmgl::to_string(cfg.problem) << " psi=" << irmgl::to_string(cfg.psi.kind)
            << " delta_rel=" << irmgl::format_double(cfg.noise.delta_rel)
            << " k=" << r.stop_index << " (" << irmgl::to_string(r.stop_reason) << ")"
            << " residual=" << r.trace.back().residual << " threshold=" << r.threshold
            << " RE=" << out.quality.re << " PSNR=" << out.quality.psnr_standard
            << " SSIM=" << out.quality.ssim << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-Laplacian assisted iterative regularization experiments"};
  app.set_config("--config", "", "key=value configuration file; command-line flags win");

  irmgl::ExperimentConfig cfg;
  std::string problem = "ct";
  std::string psi = "adjoint";
  std::string metric = "chebyshev";
  std::string demo = "example";
  std::string out_dir = "out";
  double wp = 0.0;

  app.add_option("--problem", problem, "ct | deblur | laplacian_demo")->capture_default_str();
  app.add_option("--size", cfg.size, "image side length E")->capture_default_str();
  app.add_option("--angles", cfg.angles, "number of projection angles (ct)")->capture_default_str();
  app.add_option("--rho", cfg.rho, "Gaussian blur width (deblur)")->capture_default_str();
  app.add_option("--psi", psi, "initial reconstructor: adjoint | fbp | tikhonov | tv")
      ->capture_default_str();
  app.add_option("--lambda", cfg.psi.lambda, "Tikhonov weight")->capture_default_str();
  app.add_option("--tv-weight", cfg.psi.tv_weight, "TV denoising weight")->capture_default_str();
  app.add_option("--tv-iterations", cfg.psi.tv_iterations, "Chambolle iteration cap")
      ->capture_default_str();
  app.add_option("--delta-rel", cfg.noise.delta_rel, "relative noise level")->capture_default_str();
  app.add_option("--seed", cfg.noise.seed, "noise seed")->capture_default_str();
  app.add_option("--tau", cfg.solver.tau, "discrepancy factor (> 1)")->capture_default_str();
  app.add_option("--eta0", cfg.solver.eta0, "data step factor")->capture_default_str();
  app.add_option("--eta1", cfg.solver.eta1, "data step cap")->capture_default_str();
  app.add_option("--nu0", cfg.solver.nu0, "graph step factor on the squared residual")->capture_default_str();
  app.add_option("--nu1", cfg.solver.nu1, "graph step budget")->capture_default_str();
  app.add_option("--nu2", cfg.solver.nu2, "graph step cap")->capture_default_str();
  app.add_option("--wp", wp, "ball radius used in the constant C (default ||u0||)");
  app.add_option("--radius", cfg.solver.graph.radius, "graph neighbourhood radius R")
      ->capture_default_str();
  app.add_option("--sigma", cfg.solver.graph.sigma, "graph intensity bandwidth")
      ->capture_default_str();
  app.add_option("--metric", metric, "pixel distance: chebyshev | manhattan")->capture_default_str();
  app.add_option("--graph-period", cfg.solver.graph_update_period,
                 "rebuild the Laplacian every p iterations")
      ->capture_default_str();
  app.add_option("--max-iter", cfg.solver.max_iter, "iteration cap")->capture_default_str();
  app.add_option("--norm-seed", cfg.solver.norm_seed, "seed of the operator norm estimate")
      ->capture_default_str();
  app.add_option("--demo-image", demo, "laplacian_demo image: example | constant")
      ->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    cfg.problem = irmgl::parse_problem(problem);
    cfg.psi.kind = irmgl::parse_reconstructor(psi);
    cfg.solver.graph.metric = irmgl::parse_metric(metric);
    cfg.demo_image = irmgl::parse_demo_image(demo);
    cfg.output_dir = out_dir;
    if (app.count("--wp") > 0) cfg.solver.wp = wp;

    if (cfg.problem == irmgl::Problem::laplacian_demo) {
      // The demo graph: 4-neighbourhood, sharp kernel.
      if (app.count("--radius") == 0) cfg.solver.graph.radius = 1.0;
      if (app.count("--sigma") == 0) cfg.solver.graph.sigma = 0.01;
      if (app.count("--metric") == 0) cfg.solver.graph.metric = irmgl::DistanceMetric::manhattan;
      const auto L = irmgl::run_laplacian_demo(cfg);
      std::cout << "laplacian_demo: " << L.num_entries() << " weights written to "
                << cfg.output_dir.string() << '\n';
      return 0;
    }

    cfg.validate();
    const auto outcome = cfg.problem == irmgl::Problem::ct ? irmgl::run_ct(cfg)
                                                           : irmgl::run_deblur(cfg);
    print_summary(cfg, outcome);
    return 0;
  } catch (const irmgl::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const irmgl::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const irmgl::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
