#include "irmgl/operator_norm.hpp"

#include <cmath>

#include "irmgl/errors.hpp"
#include "irmgl/random.hpp"

namespace irmgl {

template <typename Range>
NormEstimate estimate_operator_norm(const LinearOperator<Range>& A, std::size_t max_iterations,
                                    double tol, std::uint64_t seed) {
  if (max_iterations == 0) throw ConfigError("estimate_operator_norm: need at least one iteration");
  const CounterRng rng(seed);
  ImageGrid x(A.domain_shape());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = rng.normal(k);
  x = scale(1.0 / norm(x), x);

  NormEstimate est;
  double previous = 0.0;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    ImageGrid y = A.apply_adjoint(A.apply(x));
    const double rayleigh = dot(x, y);
    const double ny = norm(y);
    est.value = std::sqrt(std::max(rayleigh, 0.0));
    est.iterations = it;
    if (ny == 0.0) {
      est.converged = true;
      break;
    }
    if (it > 1 && std::abs(est.value - previous) <= tol * est.value) {
      est.converged = true;
      break;
    }
    previous = est.value;
    x = scale(1.0 / ny, y);
  }
  return est;
}

template NormEstimate estimate_operator_norm(const LinearOperator<ImageGrid>&, std::size_t, double,
                                             std::uint64_t);
template NormEstimate estimate_operator_norm(const LinearOperator<Sinogram>&, std::size_t, double,
                                             std::uint64_t);

}  // namespace irmgl
