#include "irmgl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "irmgl/io.hpp"
#include "irmgl/operator_norm.hpp"

namespace irmgl {

void SolverParams::validate() const {
  if (!(tau > 1.0)) throw ConfigError("tau must be > 1");
  if (!(eta0 > 0.0) || !(eta1 > 0.0)) throw ConfigError("eta0 and eta1 must be > 0");
  if (!(nu2 > 0.0)) throw ConfigError("nu2 must be > 0");
  if (!(nu0 >= 0.0) || !(nu1 >= 0.0)) throw ConfigError("nu0 and nu1 must be >= 0");
  if (graph_update_period == 0) throw ConfigError("graph update period must be >= 1");
  if (wp && !(*wp > 0.0)) throw ConfigError("ball radius must be > 0");
  if (operator_norm && !(*operator_norm > 0.0)) throw ConfigError("operator norm must be > 0");
  if (norm_iterations == 0) throw ConfigError("norm estimation needs at least one iteration");
  graph.validate();
}

const char* to_string(StopReason r) {
  return r == StopReason::discrepancy_met ? "discrepancy_met" : "max_iter_reached";
}

DivergenceError::DivergenceError(std::size_t k, std::vector<IterateRecord> t)
    : NumericalError("iteration diverged (non-finite values) at k = " + std::to_string(k)),
      iteration(k),
      trace(std::move(t)) {}

double step_alpha(double residual_norm, double adjoint_residual_norm, const SolverParams& p) {
  if (adjoint_residual_norm > 0.0) {
    const double ratio = residual_norm / adjoint_residual_norm;
    return std::min(p.eta0 * ratio * ratio, p.eta1);
  }
  return p.eta1;
}

double step_beta(double laplacian_term_norm, double residual_norm, const SolverParams& p) {
  const double q = laplacian_term_norm;
  if (q == 0.0) return 0.0;
  return std::min({p.nu0 * residual_norm * residual_norm / q, p.nu1 / q, p.nu2});
}

double eta_floor(const SolverParams& p, double operator_norm) {
  const double n = kNormSafety * operator_norm;
  return std::min(p.eta0 / (n * n), p.eta1);
}

double constant_C(const SolverParams& p, double eta, double wp) {
  return eta - p.eta1 / p.tau - p.nu0 * (wp + p.nu1) - p.eta0 * p.eta1;
}

template <typename Range>
SolveResult solve(const LinearOperator<Range>& A, const Range& v, double delta,
                  const Reconstructor<Range>& psi, const SolverParams& params,
                  const ImageGrid* truth) {
  params.validate();
  if (!(delta >= 0.0)) throw ConfigError("noise level delta must be >= 0");
  detail::require_same_shape(v.shape(), A.range_shape(), "solve data");
  if (truth) detail::require_same_shape(truth->shape(), A.domain_shape(), "solve truth");

  SolveResult res;
  ImageGrid u = psi(v);
  detail::require_same_shape(u.shape(), A.domain_shape(), "initial reconstruction");

  if (params.operator_norm) {
    res.operator_norm = *params.operator_norm;
  } else {
    const auto est = estimate_operator_norm(A, params.norm_iterations, params.norm_tol,
                                            params.norm_seed);
    res.operator_norm = est.value;
    res.operator_norm_converged = est.converged;
    if (!est.converged)
      res.warnings.push_back("operator norm power iteration did not converge; using " +
                             format_double(est.value));
  }
  res.eta_floor = eta_floor(params, res.operator_norm);
  if (params.wp) {
    res.wp = *params.wp;
  } else {
    res.wp = norm(u);
    res.warnings.push_back("ball radius not given; using ||u0|| = " + format_double(res.wp));
  }
  res.constant_C = constant_C(params, res.eta_floor, res.wp);
  if (res.constant_C <= 0.0)
    res.warnings.push_back("constant C = " + format_double(res.constant_C) +
                           " is not positive; monotonicity of the error is not guaranteed");
  res.threshold = params.tau * delta;

  std::optional<SparseLaplacian> lap;
  ImageGrid lap_term(A.domain_shape());
  for (std::size_t k = 0;; ++k) {
    const Range r = sub(A.apply(u), v);
    const ImageGrid g = A.apply_adjoint(r);
    if (k % params.graph_update_period == 0) {
      if (lap) lap->reweight(u, params.graph.sigma);
      else lap.emplace(build_laplacian(u, params.graph));
    }
    lap->apply(u.values(), lap_term.values());

    IterateRecord rec;
    rec.k = k;
    rec.residual = norm(r);
    rec.laplacian_term_norm = norm(lap_term);
    const double gnorm = norm(g);
    rec.alpha = step_alpha(rec.residual, gnorm, params);
    rec.beta = step_beta(rec.laplacian_term_norm, rec.residual, params);
    if (truth) rec.error_to_truth = norm(sub(u, *truth));
    res.trace.push_back(rec);

    if (!std::isfinite(rec.residual) || !std::isfinite(gnorm) ||
        !std::isfinite(rec.laplacian_term_norm))
      throw DivergenceError(k, std::move(res.trace));

    if (rec.residual <= res.threshold) {
      res.stop_reason = StopReason::discrepancy_met;
      res.stop_index = k;
      break;
    }
    if (k >= params.max_iter) {
      res.stop_reason = StopReason::max_iter_reached;
      res.stop_index = k;
      break;
    }

    axpy_inplace(-rec.alpha, g, u);
    axpy_inplace(-rec.beta, lap_term, u);
    if (!u.all_finite()) throw DivergenceError(k + 1, std::move(res.trace));
  }
  res.final_iterate = std::move(u);
  return res;
}

template SolveResult solve(const LinearOperator<ImageGrid>&, const ImageGrid&, double,
                           const Reconstructor<ImageGrid>&, const SolverParams&, const ImageGrid*);
template SolveResult solve(const LinearOperator<Sinogram>&, const Sinogram&, double,
                           const Reconstructor<Sinogram>&, const SolverParams&, const ImageGrid*);

void write_trace_csv(const std::filesystem::path& path, const std::vector<IterateRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "k,residual,alpha,beta,laplacian_term_norm,error_to_truth\n";
  for (const auto& r : trace) {
    out << r.k << ',' << format_double(r.residual) << ',' << format_double(r.alpha) << ','
        << format_double(r.beta) << ',' << format_double(r.laplacian_term_norm) << ',';
    if (r.error_to_truth) out << format_double(*r.error_to_truth);
    out << '\n';
  }
}

}  // namespace irmgl
