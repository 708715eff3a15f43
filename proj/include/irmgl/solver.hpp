#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "irmgl/errors.hpp"
#include "irmgl/graph.hpp"
#include "irmgl/linear_operator.hpp"
#include "irmgl/recon.hpp"

namespace irmgl {

// Safety factor applied to the power-iteration estimate of ||A||, which is a lower bound.
inline constexpr double kNormSafety = 1.01;

struct SolverParams {
  double eta0 = 0.2;
  double eta1 = 0.5;
  double nu0 = 0.05;
  double nu1 = 0.05;
  double nu2 = 1.0;
  double tau = 2.0;
  // Radius of the ball around u0 assumed to contain the exact solution. Only enters the
  // constant C; defaults to ||u0||.
  std::optional<double> wp;
  std::size_t max_iter = 2000;
  // The Laplacian is rebuilt from the current iterate whenever k % period == 0.
  std::size_t graph_update_period = 1;
  GraphConfig graph;

  // ||A|| handling: a known value skips the power iteration.
  std::optional<double> operator_norm;
  std::size_t norm_iterations = 1000;
  double norm_tol = 1e-10;
  std::uint64_t norm_seed = 12345;

  void validate() const;
};

struct IterateRecord {
  std::size_t k = 0;
  double residual = 0.0;             // ||A u_k - v||
  double alpha = 0.0;
  double beta = 0.0;
  double laplacian_term_norm = 0.0;  // ||L_{u_k} u_k||
  std::optional<double> error_to_truth;
};

enum class StopReason { discrepancy_met, max_iter_reached };
const char* to_string(StopReason r);

struct SolveResult {
  ImageGrid final_iterate;
  std::size_t stop_index = 0;
  StopReason stop_reason = StopReason::max_iter_reached;
  std::vector<IterateRecord> trace;
  double constant_C = 0.0;
  double eta_floor = 0.0;
  double operator_norm = 0.0;
  bool operator_norm_converged = true;
  double wp = 0.0;
  double threshold = 0.0;  // tau * delta
  std::vector<std::string> warnings;
};

// An iterate, its residual or its gradient became non-finite. The trace up to that point
// is kept.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(std::size_t k, std::vector<IterateRecord> trace);
  std::size_t iteration;
  std::vector<IterateRecord> trace;
};

// min(eta0 ||r||^2 / ||A* r||^2, eta1), or eta1 when A* r = 0.
double step_alpha(double residual_norm, double adjoint_residual_norm, const SolverParams& p);

template <typename Range>
double step_alpha(const LinearOperator<Range>& A, const ImageGrid& u, const Range& v,
                  const SolverParams& p) {
  const Range r = sub(A.apply(u), v);
  return step_alpha(norm(r), norm(A.apply_adjoint(r)), p);
}

// min(nu0 ||r||^2 / q, nu1 / q, nu2) with q = ||L_u u||, and 0 when q == 0.
double step_beta(double laplacian_term_norm, double residual_norm, const SolverParams& p);

// min(eta0 / (kNormSafety ||A||)^2, eta1)
double eta_floor(const SolverParams& p, double operator_norm);

// eta - eta1 / tau - nu0 (wp + nu1) - eta0 eta1
double constant_C(const SolverParams& p, double eta, double wp);

// Runs u_{k+1} = u_k - alpha_k A*(A u_k - v) - beta_k L_{u_k} u_k from u_0 = psi(v) until
// ||A u_k - v|| <= tau delta (checked before each update) or k reaches max_iter.
// delta = 0 gives the exact-data variant, which only stops early on a zero residual.
template <typename Range>
SolveResult solve(const LinearOperator<Range>& A, const Range& v, double delta,
                  const Reconstructor<Range>& psi, const SolverParams& params,
                  const ImageGrid* truth = nullptr);

extern template SolveResult solve(const LinearOperator<ImageGrid>&, const ImageGrid&, double,
                                  const Reconstructor<ImageGrid>&, const SolverParams&,
                                  const ImageGrid*);
extern template SolveResult solve(const LinearOperator<Sinogram>&, const Sinogram&, double,
                                  const Reconstructor<Sinogram>&, const SolverParams&,
                                  const ImageGrid*);

// Header: k,residual,alpha,beta,laplacian_term_norm,error_to_truth
void write_trace_csv(const std::filesystem::path& path, const std::vector<IterateRecord>& trace);

}  // namespace irmgl
