#include "irmgl/experiment.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "irmgl/blur.hpp"
#include "irmgl/io.hpp"
#include "irmgl/radon.hpp"

namespace irmgl {

const char* to_string(Problem p) {
  switch (p) {
    case Problem::ct: return "ct";
    case Problem::deblur: return "deblur";
    case Problem::laplacian_demo: return "laplacian_demo";
  }
  return "?";
}

Problem parse_problem(const std::string& name) {
  if (name == "ct") return Problem::ct;
  if (name == "deblur") return Problem::deblur;
  if (name == "laplacian_demo") return Problem::laplacian_demo;
  throw ConfigError("unknown problem '" + name + "' (ct|deblur|laplacian_demo)");
}

const char* to_string(DemoImage d) { return d == DemoImage::example ? "example" : "constant"; }

DemoImage parse_demo_image(const std::string& name) {
  if (name == "example") return DemoImage::example;
  if (name == "constant") return DemoImage::constant;
  throw ConfigError("unknown demo image '" + name + "' (example|constant)");
}

void ExperimentConfig::validate() const {
  solver.validate();
  psi.validate();
  if (!(noise.delta_rel >= 0.0)) throw ConfigError("delta-rel must be >= 0");
  if (problem == Problem::laplacian_demo) return;
  if (size < 16) throw ConfigError("size must be at least 16");
  if (problem == Problem::ct && angles == 0) throw ConfigError("angles must be positive");
  if (problem == Problem::deblur) {
    if (!(rho > 0.0)) throw ConfigError("rho must be > 0");
    if (psi.kind == ReconstructorKind::fbp || psi.kind == ReconstructorKind::tv)
      throw ConfigError("deblur supports --psi adjoint|tikhonov only");
  }
}

ImageGrid demo_image(DemoImage which) {
  if (which == DemoImage::constant) return ImageGrid(2, 2, 0.5);
  return ImageGrid(2, 2, std::vector<double>{0.2, 0.3, 0.5, 0.1});
}

std::string describe_config(const ExperimentConfig& c) {
  std::ostringstream o;
  const auto& s = c.solver;
  o << "problem=" << to_string(c.problem) << '\n'
    << "size=" << c.size << '\n'
    << "angles=" << c.angles << '\n'
    << "rho=" << format_double(c.rho) << '\n'
    << "demo-image=" << to_string(c.demo_image) << '\n'
    << "psi=" << to_string(c.psi.kind) << '\n'
    << "lambda=" << format_double(c.psi.lambda) << '\n'
    << "tv-weight=" << format_double(c.psi.tv_weight) << '\n'
    << "tv-iterations=" << c.psi.tv_iterations << '\n'
    << "delta-rel=" << format_double(c.noise.delta_rel) << '\n'
    << "seed=" << c.noise.seed << '\n'
    << "tau=" << format_double(s.tau) << '\n'
    << "eta0=" << format_double(s.eta0) << '\n'
    << "eta1=" << format_double(s.eta1) << '\n'
    << "nu0=" << format_double(s.nu0) << '\n'
    << "nu1=" << format_double(s.nu1) << '\n'
    << "nu2=" << format_double(s.nu2) << '\n'
    << "radius=" << format_double(s.graph.radius) << '\n'
    << "sigma=" << format_double(s.graph.sigma) << '\n'
    << "metric=" << to_string(s.graph.metric) << '\n'
    << "graph-period=" << s.graph_update_period << '\n'
    << "max-iter=" << s.max_iter << '\n'
    << "norm-seed=" << s.norm_seed << '\n';
  if (s.wp) o << "wp=" << format_double(*s.wp) << '\n';
  return o.str();
}

namespace {

std::string report_row(const ExperimentConfig& c, const RunOutcome& out) {
  const auto& r = out.result;
  std::ostringstream o;
  o << to_string(c.psi.kind) << ',' << format_double(c.noise.delta_rel) << ',' << r.stop_index
    << ',' << format_double(r.trace.back().residual) << ',' << format_double(out.quality.re) << ','
    << format_double(out.quality.psnr_standard) << ',' << format_double(out.quality.psnr_paper)
    << ',' << format_double(out.quality.ssim) << ',' << format_double(r.constant_C) << ','
    << format_double(r.eta_floor) << ',' << to_string(r.stop_reason);
  return o.str();
}

// Keeps one row per (psi, delta_rel); a rerun replaces its own row in place.
void upsert_report(const std::filesystem::path& path, const std::string& row) {
  const auto key = row.substr(0, row.find(',', row.find(',') + 1));
  std::vector<std::string> rows;
  bool replaced = false;
  if (std::ifstream in(path); in) {
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line.substr(0, key.size() + 1) == key + ",") {
        rows.push_back(row);
        replaced = true;
      } else {
        rows.push_back(line);
      }
    }
  }
  if (!replaced) rows.push_back(row);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kReportHeader << '\n';
  for (const auto& r : rows) out << r << '\n';
}

void write_meta(const ExperimentConfig& c, const SolveResult* r, double delta,
                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << describe_config(c);
  if (r) {
    out << "# operator_norm_estimate=" << format_double(r->operator_norm) << '\n'
        << "# operator_norm_converged=" << (r->operator_norm_converged ? "true" : "false") << '\n'
        << "# eta_floor=" << format_double(r->eta_floor) << '\n'
        << "# wp_used=" << format_double(r->wp) << '\n'
        << "# constant_C=" << format_double(r->constant_C) << '\n'
        << "# delta=" << format_double(delta) << '\n'
        << "# threshold=" << format_double(r->threshold) << '\n';
    for (const auto& w : r->warnings) out << "# warning: " << w << '\n';
  }
}

template <typename Range>
RunOutcome run_problem(const ExperimentConfig& c, const LinearOperator<Range>& A,
                       const Reconstructor<Range>& psi, const ImageGrid& truth) {
  std::filesystem::create_directories(c.output_dir);
  const Range clean = A.apply(truth);
  const auto noisy = add_noise(clean, c.noise);

  RunOutcome out;
  out.delta = noisy.delta;
  try {
    out.result = solve(A, noisy.data, noisy.delta, psi, c.solver, &truth);
  } catch (const DivergenceError& e) {
    write_trace_csv(c.output_dir / "trace.csv", e.trace);
    write_meta(c, nullptr, noisy.delta, c.output_dir / "meta.txt");
    throw;
  }
  out.quality = evaluate_quality(out.result.final_iterate, truth);

  write_trace_csv(c.output_dir / "trace.csv", out.result.trace);
  write_pgm(c.output_dir / "recon.pgm", out.result.final_iterate);
  write_csv(c.output_dir / "recon.csv", out.result.final_iterate);
  write_meta(c, &out.result, noisy.delta, c.output_dir / "meta.txt");
  upsert_report(c.output_dir / "report.csv", report_row(c, out));
  return out;
}

}  // namespace

RunOutcome run_ct(const ExperimentConfig& config) {
  if (config.problem != Problem::ct) throw ConfigError("run_ct: problem is not ct");
  config.validate();
  const RadonOperator A(RadonGeometry{config.size, config.angles});
  return run_problem<Sinogram>(config, A, make_reconstructor(config.psi, A),
                               shepp_logan(config.size));
}

RunOutcome run_deblur(const ExperimentConfig& config) {
  if (config.problem != Problem::deblur) throw ConfigError("run_deblur: problem is not deblur");
  config.validate();
  const BlurOperator A(Shape{config.size, config.size}, BlurKernel::gaussian(config.rho));
  const LinearOperator<ImageGrid>& base = A;
  return run_problem<ImageGrid>(config, base, make_reconstructor(config.psi, base),
                                shepp_logan(config.size));
}

SparseLaplacian run_laplacian_demo(const ExperimentConfig& config) {
  if (config.problem != Problem::laplacian_demo)
    throw ConfigError("run_laplacian_demo: problem is not laplacian_demo");
  config.solver.graph.validate();
  std::filesystem::create_directories(config.output_dir);
  const ImageGrid image = demo_image(config.demo_image);
  SparseLaplacian L = build_laplacian(image, config.solver.graph);
  L.write_csv(config.output_dir / "weights.csv", config.output_dir / "degrees.csv");
  write_csv(config.output_dir / "image.csv", image);
  write_meta(config, nullptr, 0.0, config.output_dir / "meta.txt");
  return L;
}

}  // namespace irmgl
