#include <doctest.h>

#include <cmath>
#include <numbers>

#include "irmgl/blur.hpp"
#include "irmgl/operator_norm.hpp"
#include "irmgl/radon.hpp"
#include "irmgl/reference.hpp"
#include "support.hpp"

using namespace irmgl;

namespace {

template <typename Tag>
void adjoint_dot_test(const LinearOperator<Array2D<Tag>>& A, int pairs, std::uint64_t seed) {
  for (int p = 0; p < pairs; ++p) {
    const auto u = test::random_normal<ImageTag>(A.domain_shape(), seed + 2 * p);
    const auto s = test::random_normal<Tag>(A.range_shape(), seed + 2 * p + 1);
    const auto Au = A.apply(u);
    const double lhs = dot(Au, s);
    const double rhs = dot(u, A.apply_adjoint(s));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * norm(Au) * norm(s));
  }
}

template <typename Tag>
void linearity_test(const LinearOperator<Array2D<Tag>>& A, std::uint64_t seed) {
  const auto u = test::random_normal<ImageTag>(A.domain_shape(), seed);
  const auto v = test::random_normal<ImageTag>(A.domain_shape(), seed + 1);
  const auto lhs = A.apply(add(scale(2.0, u), v));
  const auto rhs = add(scale(2.0, A.apply(u)), A.apply(v));
  CHECK(test::max_abs_diff(lhs, rhs) <= 1e-10 * norm(rhs));

  const auto s = test::random_normal<Tag>(A.range_shape(), seed + 2);
  const auto t = test::random_normal<Tag>(A.range_shape(), seed + 3);
  const auto l2 = A.apply_adjoint(add(scale(-3.0, s), t));
  const auto r2 = add(scale(-3.0, A.apply_adjoint(s)), A.apply_adjoint(t));
  CHECK(test::max_abs_diff(l2, r2) <= 1e-10 * norm(r2));
}

ImageGrid disc(std::size_t E, double radius) {
  ImageGrid u(E, E);
  const double c = (static_cast<double>(E) - 1.0) / 2.0;
  for (std::size_t i = 0; i < E; ++i)
    for (std::size_t j = 0; j < E; ++j) {
      const double di = static_cast<double>(i) - c, dj = static_cast<double>(j) - c;
      if (di * di + dj * dj <= radius * radius) u(i, j) = 1.0;
    }
  return u;
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("radon geometry") {
  const RadonGeometry g{64, 30};
  CHECK(g.num_detectors() == 91);
  CHECK(g.sinogram_shape() == Shape{30, 91});
  CHECK(g.angle(0) == 0.0);
  CHECK(g.angle(15) == doctest::Approx(std::numbers::pi));
  CHECK(g.detector_offset(45) == doctest::Approx(0.0));
  CHECK(g.detector_offset(0) == doctest::Approx(-45.0));
  CHECK(RadonGeometry{16, 10}.num_detectors() == 23);
  CHECK_THROWS_AS((RadonGeometry{0, 10}.validate()), ConfigError);
  CHECK_THROWS_AS((RadonGeometry{8, 0}.validate()), ConfigError);
}

TEST_CASE("bilinear stencil") {
  const auto s = bilinear_stencil(2.25, 3.5, 8, 8);
  double sum = 0.0;
  for (double w : s.weight) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  const auto out = bilinear_stencil(-3.0, 3.0, 8, 8);
  for (double w : out.weight) CHECK(w == 0.0);
}

TEST_CASE("radon zero, linearity and adjoint identity") {
  for (std::size_t E : {8, 16}) {
    const RadonOperator A(RadonGeometry{E, 10});
    const auto z = A.apply(ImageGrid(E, E));
    for (double v : z.values()) CHECK(v == 0.0);
    const auto za = A.apply_adjoint(Sinogram(A.range_shape()));
    for (double v : za.values()) CHECK(v == 0.0);
    linearity_test(A, 40 + E);
    adjoint_dot_test(A, 20, 100 + E);
  }
}

TEST_CASE("radon adjoint is the dense transpose") {
  const RadonOperator A(RadonGeometry{8, 6});
  const Eigen::MatrixXd M = test::dense_forward(A);
  const Eigen::MatrixXd Mt = test::dense_adjoint(A);
  CHECK((Mt - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("radon of a single pixel keeps its mass at every angle") {
  const RadonGeometry g{16, 12};
  const RadonOperator A(g);
  ImageGrid u(16, 16);
  u(8, 8) = 1.0;
  const auto s = A.apply(u);
  for (std::size_t t = 0; t < g.num_angles; ++t) {
    double sum = 0.0;
    for (std::size_t j = 0; j < s.cols(); ++j) sum += s(t, j);
    CHECK(sum == doctest::Approx(1.0).epsilon(0.05));
  }
  // Column sums of the dense matrix agree with the same mass.
  const Eigen::MatrixXd M = test::dense_forward(A);
  const double col = M.col(8 * 16 + 8).sum() / static_cast<double>(g.num_angles);
  CHECK(col == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("radon of a disc is nearly angle independent") {
  const RadonGeometry g{64, 30};
  const RadonOperator A(g);
  const auto s = A.apply(disc(64, 20.0));
  std::vector<double> mean(s.cols(), 0.0);
  for (std::size_t t = 0; t < s.rows(); ++t)
    for (std::size_t j = 0; j < s.cols(); ++j) mean[j] += s(t, j) / static_cast<double>(s.rows());
  const double mnorm = norm(std::span<const double>(mean));
  for (std::size_t t = 0; t < s.rows(); ++t) {
    double d = 0.0;
    for (std::size_t j = 0; j < s.cols(); ++j) d += (s(t, j) - mean[j]) * (s(t, j) - mean[j]);
    CHECK(std::sqrt(d) <= 0.02 * mnorm);
  }
}

TEST_CASE("radon matches the serial ray marcher") {
  const RadonGeometry g{24, 14};
  const RadonOperator A(g);
  const auto u = test::random_image(g.image_shape(), 3);
  const auto s = test::random_normal<SinogramTag>(g.sinogram_shape(), 4);
  const auto Au = A.apply(u);
  const auto Ats = A.apply_adjoint(s);
  CHECK(test::max_abs_diff(Au, reference::radon_apply(g, u)) <= 1e-12 * norm(Au));
  CHECK(test::max_abs_diff(Ats, reference::radon_adjoint(g, s)) <= 1e-12 * norm(Ats));
}

TEST_CASE("blur kernel") {
  const auto k = BlurKernel::gaussian(1.5);
  CHECK(k.radius == 6);
  REQUIRE(k.taps.size() == 13);
  double sum = 0.0;
  for (double t : k.taps) sum += t;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  for (int i = 0; i < k.radius; ++i) CHECK(k.taps[i] == k.taps[2 * k.radius - i]);
  CHECK(k.taps[6] / k.taps[7] == doctest::Approx(std::exp(1.0 / (2.0 * 2.25))));
  CHECK_THROWS_AS(BlurKernel::gaussian(0.0), ConfigError);
}

TEST_CASE("blur preserves constants away from the border") {
  const BlurOperator B({32, 32}, BlurKernel::gaussian(1.5));
  const auto out = B.apply(ImageGrid(32, 32, 1.0));
  const int r = B.kernel().radius;
  for (int i = r; i < 32 - r; ++i)
    for (int j = r; j < 32 - r; ++j)
      CHECK(std::abs(out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) - 1.0) <= 1e-12);
  CHECK(out(0, 0) < 1.0);
}

TEST_CASE("narrow blur is the identity") {
  const BlurOperator B({16, 16}, BlurKernel::gaussian(0.05));
  const auto u = test::random_image({16, 16}, 8);
  CHECK(test::max_abs_diff(B.apply(u), u) <= 1e-15);
  CHECK(test::max_abs_diff(B.apply_adjoint(u), u) <= 1e-15);
}

TEST_CASE("blur adjoint, linearity and flips") {
  const BlurOperator B({32, 32}, BlurKernel::gaussian(1.5));
  linearity_test(B, 70);
  adjoint_dot_test(B, 20, 500);

  const BlurOperator R({20, 27}, BlurKernel::gaussian(1.2));
  adjoint_dot_test(R, 5, 900);
  const auto u = test::random_image({20, 27}, 77);
  auto flip_h = [](const ImageGrid& x) {
    ImageGrid y(x.shape());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) y(i, x.cols() - 1 - j) = x(i, j);
    return y;
  };
  auto flip_v = [](const ImageGrid& x) {
    ImageGrid y(x.shape());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) y(x.rows() - 1 - i, j) = x(i, j);
    return y;
  };
  CHECK(test::max_abs_diff(R.apply(flip_h(u)), flip_h(R.apply(u))) <= 1e-14);
  CHECK(test::max_abs_diff(R.apply(flip_v(u)), flip_v(R.apply(u))) <= 1e-14);
}

TEST_CASE("blur matches direct convolution") {
  const auto k = BlurKernel::gaussian(1.5);
  const BlurOperator B({25, 31}, k);
  const auto u = test::random_image({25, 31}, 12);
  CHECK(test::max_abs_diff(B.apply(u), reference::blur_apply(k, u)) <= 1e-14);
  CHECK(test::max_abs_diff(B.apply_adjoint(u), reference::blur_adjoint(k, u)) <= 1e-14);
  const Eigen::MatrixXd M = test::dense_forward(BlurOperator({9, 9}, k));
  const Eigen::MatrixXd Mt = test::dense_adjoint(BlurOperator({9, 9}, k));
  CHECK((Mt - M.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("operator norm estimate") {
  const ScaledIdentity I({10, 10}, 1.0), I3({10, 10}, 3.0);
  CHECK(estimate_operator_norm(I, 100, 1e-12, 1).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(estimate_operator_norm(I3, 100, 1e-12, 1).value == doctest::Approx(3.0).epsilon(1e-6));

  const RadonOperator A(RadonGeometry{16, 10});
  const Eigen::MatrixXd M = test::dense_forward(A);
  const double sv = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
  const auto est = estimate_operator_norm(A, 1000, 1e-10, 12345);
  CHECK(est.converged);
  CHECK(est.value <= sv * (1.0 + 1e-12));
  CHECK(est.value == doctest::Approx(sv).epsilon(1e-3));

  const auto capped = estimate_operator_norm(A, 1, 1e-16, 12345);
  CHECK_FALSE(capped.converged);
}

}
