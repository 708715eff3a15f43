#pragma once

#include <cstddef>
#include <cstdint>

#include "irmgl/linear_operator.hpp"

namespace irmgl {

struct NormEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Power iteration on A*A from a seeded Gaussian start. Returns sqrt of the final
// Rayleigh quotient, which never exceeds the true norm; stops when the relative change
// drops below tol or after max_iterations (converged = false).
template <typename Range>
NormEstimate estimate_operator_norm(const LinearOperator<Range>& A, std::size_t max_iterations,
                                    double tol, std::uint64_t seed);

extern template NormEstimate estimate_operator_norm(const LinearOperator<ImageGrid>&, std::size_t,
                                                    double, std::uint64_t);
extern template NormEstimate estimate_operator_norm(const LinearOperator<Sinogram>&, std::size_t,
                                                    double, std::uint64_t);

}  // namespace irmgl
