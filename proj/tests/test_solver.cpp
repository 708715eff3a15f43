#include <doctest.h>

#include <cmath>
#include <fstream>
#include <string>

#include "irmgl/operator_norm.hpp"
#include "irmgl/phantoms.hpp"
#include "irmgl/radon.hpp"
#include "irmgl/solver.hpp"
#include "support.hpp"

using namespace irmgl;

namespace {

template <typename Range>
Reconstructor<Range> adjoint_of(const LinearOperator<Range>& A) {
  return [&A](const Range& v) { return psi_adjoint(A, v); };
}

struct CtCase {
  RadonOperator A;
  ImageGrid truth;
  NoisyData<SinogramTag> data;
};

CtCase ct_case(std::size_t E, std::size_t m, double delta_rel, std::uint64_t seed = 42) {
  RadonOperator A(RadonGeometry{E, m});
  auto truth = shepp_logan(E);
  auto data = add_noise(A.apply(truth), NoiseSpec{delta_rel, seed});
  return {std::move(A), std::move(truth), std::move(data)};
}

void check_record_bounds(const SolveResult& r, const SolverParams& p) {
  for (const auto& rec : r.trace) {
    CHECK(rec.alpha >= r.eta_floor * (1.0 - 1e-12));
    CHECK(rec.alpha <= p.eta1);
    CHECK(rec.beta <= p.nu2);
    const double bq = rec.beta * rec.laplacian_term_norm;
    CHECK(bq <= std::min(p.nu0 * rec.residual * rec.residual, p.nu1) * (1.0 + 1e-12));
  }
}

void check_stopping_contract(const SolveResult& r) {
  REQUIRE(r.trace.size() == r.stop_index + 1);
  for (std::size_t k = 0; k + 1 < r.trace.size(); ++k) CHECK(r.trace[k].residual > r.threshold);
  if (r.stop_reason == StopReason::discrepancy_met)
    CHECK(r.trace.back().residual <= r.threshold);
  else
    CHECK(r.trace.back().residual > r.threshold);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("alpha step") {
  const SolverParams p;
  const ScaledIdentity I({4, 4});
  const auto u = test::random_image({4, 4}, 1);
  const auto v = test::random_image({4, 4}, 2);
  CHECK(step_alpha(I, u, v, p) == doctest::Approx(0.2));
  CHECK(step_alpha(I, v, v, p) == 0.5);
  CHECK(step_alpha(0.0, 0.0, p) == 0.5);

  const RadonOperator A(RadonGeometry{16, 10});
  const double nrm = estimate_operator_norm(A, 1000, 1e-10, 12345).value;
  const double floor = eta_floor(p, nrm);
  CHECK(floor == doctest::Approx(0.2 / (1.01 * 1.01 * nrm * nrm)));
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto x = test::random_image({16, 16}, 10 + s);
    const auto d = A.apply(test::random_image({16, 16}, 500 + s));
    const double a = step_alpha(A, x, d, p);
    CHECK(a >= floor);
    CHECK(a <= p.eta1);
  }
}

TEST_CASE("beta step") {
  const SolverParams p;
  CHECK(step_beta(0.0, 3.0, p) == 0.0);
  const double big = 1e9;
  CHECK(step_beta(big, 10.0, p) * big <= p.nu1 * (1.0 + 1e-15));
  CHECK(step_beta(big, 10.0, p) == doctest::Approx(p.nu1 / big));
  const CounterRng rng(3);
  for (std::uint64_t k = 0; k < 200; ++k) {
    const double q = std::exp(20.0 * rng.uniform(2 * k) - 10.0);
    const double r = std::exp(20.0 * rng.uniform(2 * k + 1) - 10.0);
    const double b = step_beta(q, r, p);
    CHECK(b <= p.nu2);
    CHECK(b * q <= std::min(p.nu0 * r * r, p.nu1) * (1.0 + 1e-12));
  }

  const ImageGrid flat(8, 8, 0.3);
  const auto L = build_laplacian(flat, GraphConfig{});
  CHECK(norm(L.apply(flat)) == 0.0);
  CHECK(step_beta(norm(L.apply(flat)), 1.0, p) == 0.0);
}

TEST_CASE("constant C") {
  SolverParams p;
  p.nu0 = 0.0;
  CHECK(constant_C(p, 0.5, 1.0) == doctest::Approx(0.15));
  SolverParams q;
  const double eta = 0.01;
  CHECK(q.nu0 * (10.0 + q.nu1) >= eta);
  CHECK(constant_C(q, eta, 10.0) < 0.0);

  auto ct = ct_case(16, 10, 0.05);
  const auto r = solve(ct.A, ct.data.data, ct.data.delta, adjoint_of<Sinogram>(ct.A), SolverParams{});
  CHECK(r.constant_C < 0.0);
  bool warned = false;
  for (const auto& w : r.warnings) warned = warned || w.find("constant C") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("stops before the first update when the initial residual is small") {
  const RadonOperator A(RadonGeometry{16, 10});
  const auto v = A.apply(shepp_logan(16));
  const auto u0 = psi_adjoint(A, v);
  SolverParams p;
  const double delta = norm(sub(A.apply(u0), v)) / p.tau;
  const auto r = solve(A, v, delta, adjoint_of<Sinogram>(A), p);
  CHECK(r.stop_index == 0);
  CHECK(r.stop_reason == StopReason::discrepancy_met);
  CHECK(r.final_iterate == u0);
}

TEST_CASE("monotone error on the small CT problem") {
  auto ct = ct_case(32, 20, 0.05);
  const SolverParams p;
  const auto r = solve(ct.A, ct.data.data, ct.data.delta, adjoint_of<Sinogram>(ct.A), p, &ct.truth);
  CHECK(r.stop_reason == StopReason::discrepancy_met);
  const double slack = 1e-12 * norm(ct.truth);
  for (std::size_t k = 1; k < r.trace.size(); ++k)
    CHECK(*r.trace[k].error_to_truth <= *r.trace[k - 1].error_to_truth + slack);
  check_stopping_contract(r);
  check_record_bounds(r, p);
}

TEST_CASE("Landweber limit") {
  const ScaledIdentity I({8, 8});
  const auto v = test::random_image({8, 8}, 21);
  const auto u0 = test::random_image({8, 8}, 22);
  SolverParams p;
  p.nu0 = p.nu1 = 0.0;
  p.max_iter = 20;
  const auto r = solve(I, v, 0.0, Reconstructor<ImageGrid>([&](const ImageGrid&) { return u0; }), p);
  const double r0 = norm(sub(u0, v));
  REQUIRE(r.trace.size() == 21);
  for (const auto& rec : r.trace) {
    CHECK(rec.beta == 0.0);
    CHECK(rec.residual == doctest::Approx(std::pow(0.8, double(rec.k)) * r0).epsilon(1e-10));
  }
  CHECK(r.stop_reason == StopReason::max_iter_reached);
}

TEST_CASE("exact data runs to the cap") {
  auto ct = ct_case(16, 10, 0.0);
  SolverParams p;
  p.max_iter = 15;
  const auto r = solve(ct.A, ct.data.data, 0.0, adjoint_of<Sinogram>(ct.A), p);
  CHECK(r.stop_reason == StopReason::max_iter_reached);
  CHECK(r.stop_index == 15);
  CHECK(r.threshold == 0.0);
}

TEST_CASE("stale graphs keep the contract") {
  auto ct = ct_case(32, 20, 0.05);
  for (std::size_t period : {2, 5}) {
    SolverParams p;
    p.graph_update_period = period;
    const auto r = solve(ct.A, ct.data.data, ct.data.delta, adjoint_of<Sinogram>(ct.A), p, &ct.truth);
    CHECK(r.stop_reason == StopReason::discrepancy_met);
    check_stopping_contract(r);
    check_record_bounds(r, p);
  }
}

TEST_CASE("runs are bit-reproducible") {
  auto ct = ct_case(24, 12, 0.05);
  const SolverParams p;
  const auto a = solve(ct.A, ct.data.data, ct.data.delta, adjoint_of<Sinogram>(ct.A), p, &ct.truth);
  const auto b = solve(ct.A, ct.data.data, ct.data.delta, adjoint_of<Sinogram>(ct.A), p, &ct.truth);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    CHECK(a.trace[k].residual == b.trace[k].residual);
    CHECK(a.trace[k].alpha == b.trace[k].alpha);
    CHECK(a.trace[k].beta == b.trace[k].beta);
  }
  CHECK(a.final_iterate == b.final_iterate);
}

TEST_CASE("stability in the noise level at a fixed step") {
  auto clean = ct_case(32, 20, 0.0);
  SolverParams p;
  p.max_iter = 10;
  const auto psi = adjoint_of<Sinogram>(clean.A);
  const auto u0 = solve(clean.A, clean.data.data, 0.0, psi, p).final_iterate;
  double prev = INFINITY;
  for (double d : {0.1, 0.05, 0.025, 0.0125}) {
    const auto noisy = add_noise(clean.data.data, NoiseSpec{d, 7});
    const auto uk = solve(clean.A, noisy.data, 0.0, psi, p).final_iterate;
    const double gap = norm(sub(uk, u0));
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("divergence is reported with the trace") {
  const ScaledIdentity A({6, 6}, 3.0);
  const auto v = test::random_image({6, 6}, 5);
  SolverParams p;
  p.eta0 = 100.0;
  p.eta1 = 100.0;
  p.max_iter = 100000;
  try {
    solve(A, v, 1e-12, adjoint_of<ImageGrid>(A), p);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.iteration > 0);
    CHECK_FALSE(e.trace.empty());
  }
}

TEST_CASE("parameter validation") {
  const ScaledIdentity I({4, 4});
  const ImageGrid v(4, 4, 0.5);
  SolverParams p;
  p.tau = 1.0;
  CHECK_THROWS_AS(solve(I, v, 0.1, adjoint_of<ImageGrid>(I), p), ConfigError);
  p = {};
  p.graph_update_period = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.eta0 = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK_THROWS_AS(solve(I, v, -1.0, adjoint_of<ImageGrid>(I), SolverParams{}), ConfigError);
  CHECK_THROWS_AS(solve(I, ImageGrid(3, 3), 0.1, adjoint_of<ImageGrid>(I), SolverParams{}),
                  DimensionError);
}

TEST_CASE("trace csv") {
  const auto dir = test::scratch_dir("solver_trace");
  std::vector<IterateRecord> t(2);
  t[1].k = 1;
  t[1].error_to_truth = 0.5;
  write_trace_csv(dir / "t.csv", t);
  std::ifstream in(dir / "t.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,residual,alpha,beta,laplacian_term_norm,error_to_truth");
  std::getline(in, line);
  CHECK(line == "0,0,0,0,0,");
  std::getline(in, line);
  CHECK(line == "1,0,0,0,0,0.5");
}

}
