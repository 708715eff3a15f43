#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "irmgl/errors.hpp"
#include "irmgl/linear_operator.hpp"
#include "irmgl/radon.hpp"

namespace irmgl {

enum class ReconstructorKind { adjoint, fbp, tikhonov, tv };

const char* to_string(ReconstructorKind k);
ReconstructorKind parse_reconstructor(const std::string& name);

struct ReconstructorSpec {
  ReconstructorKind kind = ReconstructorKind::adjoint;
  double lambda = 50.0;  // Tikhonov weight
  double tv_weight = 0.1;
  std::size_t tv_iterations = 200;
  double tv_tol = 1e-5;
  double cg_tol = 1e-8;
  std::size_t cg_max_iter = 500;

  void validate() const;
};

// Conjugate gradients ran out of iterations; carries the last relative residual.
class CgNotConverged : public NumericalError {
 public:
  CgNotConverged(std::size_t iterations, double residual);
  std::size_t iterations;
  double residual;
};

// A* v
template <typename Range>
ImageGrid psi_adjoint(const LinearOperator<Range>& A, const Range& v) {
  detail::require_same_shape(v.shape(), A.range_shape(), "psi_adjoint");
  return A.apply_adjoint(v);
}

// Filtered back projection: each detector row is filtered with a Hann-windowed ramp
// |f| (1 + cos(pi f / f_max)) / 2 in the frequency domain (zero padded to the next power
// of two >= 2d), then back projected with the Radon adjoint.
ImageGrid psi_fbp(const RadonOperator& A, const Sinogram& v);
// Only the filtering step, exposed for testing.
Sinogram fbp_filter(const Sinogram& v);
// Back-projection weight applied after filtering.
double fbp_scale(const RadonGeometry& geom);

// (A*A + lambda I)^{-1} A* v by conjugate gradients from zero, stopping on
// ||residual|| <= tol * ||A* v||.
template <typename Range>
ImageGrid psi_tikhonov(const LinearOperator<Range>& A, const Range& v, double lambda,
                       double cg_tol = 1e-8, std::size_t cg_max_iter = 500);

extern template ImageGrid psi_tikhonov(const LinearOperator<ImageGrid>&, const ImageGrid&, double,
                                       double, std::size_t);
extern template ImageGrid psi_tikhonov(const LinearOperator<Sinogram>&, const Sinogram&, double,
                                       double, std::size_t);

// Isotropic total variation with forward differences (zero at the far border).
double total_variation(const ImageGrid& u);

// prox of weight * TV at b, by Chambolle's dual projection iteration (step 1/4). Stops
// once the largest dual update is below tol, or after max_iterations.
ImageGrid tv_denoise(const ImageGrid& b, double weight, std::size_t max_iterations = 200,
                     double tol = 1e-5);

// TV prox applied to the FBP reconstruction.
ImageGrid psi_tv(const RadonOperator& A, const Sinogram& v, const ReconstructorSpec& spec);

template <typename Range>
using Reconstructor = std::function<ImageGrid(const Range&)>;

// The returned callables keep a reference to A.
Reconstructor<Sinogram> make_reconstructor(const ReconstructorSpec& spec, const RadonOperator& A);
// FBP and TV need a tomography operator; any other forward map supports adjoint and
// Tikhonov only.
Reconstructor<ImageGrid> make_reconstructor(const ReconstructorSpec& spec,
                                            const LinearOperator<ImageGrid>& A);

}  // namespace irmgl
