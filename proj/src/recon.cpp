#include "irmgl/recon.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

namespace irmgl {

const char* to_string(ReconstructorKind k) {
  switch (k) {
    case ReconstructorKind::adjoint: return "adjoint";
    case ReconstructorKind::fbp: return "fbp";
    case ReconstructorKind::tikhonov: return "tikhonov";
    case ReconstructorKind::tv: return "tv";
  }
  return "?";
}

ReconstructorKind parse_reconstructor(const std::string& name) {
  if (name == "adjoint") return ReconstructorKind::adjoint;
  if (name == "fbp") return ReconstructorKind::fbp;
  if (name == "tikhonov") return ReconstructorKind::tikhonov;
  if (name == "tv") return ReconstructorKind::tv;
  throw ConfigError("unknown reconstructor '" + name + "' (adjoint|fbp|tikhonov|tv)");
}

void ReconstructorSpec::validate() const {
  if (kind == ReconstructorKind::tikhonov && !(lambda > 0.0))
    throw ConfigError("tikhonov lambda must be > 0");
  if (kind == ReconstructorKind::tv && !(tv_weight > 0.0))
    throw ConfigError("tv weight must be > 0");
  if (cg_max_iter == 0 || tv_iterations == 0) throw ConfigError("iteration caps must be positive");
}

CgNotConverged::CgNotConverged(std::size_t its, double res)
    : NumericalError("conjugate gradients did not converge in " + std::to_string(its) +
                     " iterations (relative residual " + std::to_string(res) + ")"),
      iterations(its),
      residual(res) {}

// ---------------------------------------------------------------------------
// FBP

namespace {

struct FftwDeleter {
  void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, FftwDeleter>;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

Sinogram fbp_filter(const Sinogram& v) {
  const std::size_t d = v.cols();
  const std::size_t P = next_pow2(2 * d);
  const std::size_t bins = P / 2 + 1;

  std::vector<double> filter(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(P);  // cycles / sample
    filter[k] = f * 0.5 * (1.0 + std::cos(std::numbers::pi * f / 0.5));
  }

  double* line = fftw_alloc_real(P);
  fftw_complex* spec = fftw_alloc_complex(bins);
  Plan fwd(fftw_plan_dft_r2c_1d(static_cast<int>(P), line, spec, FFTW_ESTIMATE));
  Plan inv(fftw_plan_dft_c2r_1d(static_cast<int>(P), spec, line, FFTW_ESTIMATE));

  Sinogram out(v.shape());
  for (std::size_t t = 0; t < v.rows(); ++t) {
    std::fill(line, line + P, 0.0);
    for (std::size_t j = 0; j < d; ++j) line[j] = v(t, j);
    fftw_execute(fwd.get());
    for (std::size_t k = 0; k < bins; ++k) {
      spec[k][0] *= filter[k];
      spec[k][1] *= filter[k];
    }
    fftw_execute(inv.get());
    for (std::size_t j = 0; j < d; ++j) out(t, j) = line[j] / static_cast<double>(P);
  }
  fwd.reset();
  inv.reset();
  fftw_free(spec);
  fftw_free(line);
  return out;
}

double fbp_scale(const RadonGeometry& geom) {
  return std::numbers::pi / static_cast<double>(geom.num_angles);
}

ImageGrid psi_fbp(const RadonOperator& A, const Sinogram& v) {
  detail::require_same_shape(v.shape(), A.range_shape(), "psi_fbp");
  return scale(fbp_scale(A.geometry()), A.apply_adjoint(fbp_filter(v)));
}

// ---------------------------------------------------------------------------
// Tikhonov

template <typename Range>
ImageGrid psi_tikhonov(const LinearOperator<Range>& A, const Range& v, double lambda,
                       double cg_tol, std::size_t cg_max_iter) {
  if (!(lambda > 0.0)) throw ConfigError("tikhonov lambda must be > 0");
  detail::require_same_shape(v.shape(), A.range_shape(), "psi_tikhonov");
  const ImageGrid rhs = A.apply_adjoint(v);
  const double rhs_norm = norm(rhs);
  ImageGrid x(A.domain_shape());
  if (rhs_norm == 0.0) return x;

  auto normal_op = [&](const ImageGrid& p) {
    ImageGrid q = A.apply_adjoint(A.apply(p));
    axpy_inplace(lambda, p, q);
    return q;
  };

  ImageGrid r = rhs;
  ImageGrid p = r;
  double rr = dot(r, r);
  for (std::size_t it = 0; it < cg_max_iter; ++it) {
    if (std::sqrt(rr) <= cg_tol * rhs_norm) return x;
    const ImageGrid q = normal_op(p);
    const double a = rr / dot(p, q);
    axpy_inplace(a, p, x);
    axpy_inplace(-a, q, r);
    const double rr_new = dot(r, r);
    p = axpy(rr_new / rr, p, r);
    rr = rr_new;
  }
  if (std::sqrt(rr) <= cg_tol * rhs_norm) return x;
  throw CgNotConverged(cg_max_iter, std::sqrt(rr) / rhs_norm);
}

template ImageGrid psi_tikhonov(const LinearOperator<ImageGrid>&, const ImageGrid&, double, double,
                                std::size_t);
template ImageGrid psi_tikhonov(const LinearOperator<Sinogram>&, const Sinogram&, double, double,
                                std::size_t);

// ---------------------------------------------------------------------------
// Total variation

namespace {

// Forward differences; the last row (column) has zero vertical (horizontal) gradient.
void gradient(const ImageGrid& u, ImageGrid& gi, ImageGrid& gj) {
  const std::size_t H = u.rows(), W = u.cols();
  for (std::size_t i = 0; i < H; ++i)
    for (std::size_t j = 0; j < W; ++j) {
      gi(i, j) = i + 1 < H ? u(i + 1, j) - u(i, j) : 0.0;
      gj(i, j) = j + 1 < W ? u(i, j + 1) - u(i, j) : 0.0;
    }
}

// Negative adjoint of gradient().
void divergence(const ImageGrid& pi, const ImageGrid& pj, ImageGrid& out) {
  const std::size_t H = pi.rows(), W = pi.cols();
  for (std::size_t i = 0; i < H; ++i)
    for (std::size_t j = 0; j < W; ++j) {
      double di = 0.0, dj = 0.0;
      if (i + 1 < H) di += pi(i, j);
      if (i > 0) di -= pi(i - 1, j);
      if (j + 1 < W) dj += pj(i, j);
      if (j > 0) dj -= pj(i, j - 1);
      out(i, j) = di + dj;
    }
}

}  // namespace

double total_variation(const ImageGrid& u) {
  ImageGrid gi(u.shape()), gj(u.shape());
  gradient(u, gi, gj);
  double tv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) tv += std::sqrt(gi[k] * gi[k] + gj[k] * gj[k]);
  return tv;
}

ImageGrid tv_denoise(const ImageGrid& b, double weight, std::size_t max_iterations, double tol) {
  if (!(weight > 0.0)) throw ConfigError("tv weight must be > 0");
  constexpr double step = 0.25;
  const Shape s = b.shape();
  ImageGrid pi(s), pj(s), div(s), gi(s), gj(s), field(s);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    divergence(pi, pj, div);
    for (std::size_t k = 0; k < b.size(); ++k) field[k] = div[k] - b[k] / weight;
    gradient(field, gi, gj);
    double max_update = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      const double denom = 1.0 + step * std::sqrt(gi[k] * gi[k] + gj[k] * gj[k]);
      const double ni = (pi[k] + step * gi[k]) / denom;
      const double nj = (pj[k] + step * gj[k]) / denom;
      max_update = std::max({max_update, std::abs(ni - pi[k]), std::abs(nj - pj[k])});
      pi[k] = ni;
      pj[k] = nj;
    }
    if (max_update < tol) break;
  }
  divergence(pi, pj, div);
  return axpy(-weight, div, b);
}

ImageGrid psi_tv(const RadonOperator& A, const Sinogram& v, const ReconstructorSpec& spec) {
  return tv_denoise(psi_fbp(A, v), spec.tv_weight, spec.tv_iterations, spec.tv_tol);
}

// ---------------------------------------------------------------------------

Reconstructor<Sinogram> make_reconstructor(const ReconstructorSpec& spec, const RadonOperator& A) {
  spec.validate();
  switch (spec.kind) {
    case ReconstructorKind::adjoint:
      return [&A](const Sinogram& v) { return psi_adjoint(A, v); };
    case ReconstructorKind::fbp:
      return [&A](const Sinogram& v) { return psi_fbp(A, v); };
    case ReconstructorKind::tikhonov:
      return [&A, spec](const Sinogram& v) {
        return psi_tikhonov(A, v, spec.lambda, spec.cg_tol, spec.cg_max_iter);
      };
    case ReconstructorKind::tv:
      return [&A, spec](const Sinogram& v) { return psi_tv(A, v, spec); };
  }
  throw ConfigError("unknown reconstructor");
}

Reconstructor<ImageGrid> make_reconstructor(const ReconstructorSpec& spec,
                                            const LinearOperator<ImageGrid>& A) {
  spec.validate();
  switch (spec.kind) {
    case ReconstructorKind::adjoint:
      return [&A](const ImageGrid& v) { return psi_adjoint(A, v); };
    case ReconstructorKind::tikhonov:
      return [&A, spec](const ImageGrid& v) {
        return psi_tikhonov(A, v, spec.lambda, spec.cg_tol, spec.cg_max_iter);
      };
    case ReconstructorKind::fbp:
    case ReconstructorKind::tv:
      throw ConfigError(std::string("reconstructor '") + to_string(spec.kind) +
                        "' requires a tomography operator");
  }
  throw ConfigError("unknown reconstructor");
}

}  // namespace irmgl
