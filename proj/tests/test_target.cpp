#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gss/linalg.hpp"
#include "gss/target.hpp"
#include "sampler_checks.hpp"

using gss::Manifold;
using gss::Matrix;
using gss::Point;
using gss::Vector;
using testutil::max_gradient_relative_error;

namespace {

Matrix random_orthogonal(int k, gss::Rng& rng) {
  Matrix g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = gss::standard_normal(rng);
  return gss::compact_qr(g).q;
}

}  // namespace

TEST_CASE("stiefel vmf log density is the trace inner product") {
  gss::Rng rng = gss::make_rng(301);
  const Point gamma = testutil::random_point(Manifold::stiefel(4, 2), rng);
  CHECK(gss::vmf_stiefel_logp(gamma, {Matrix::Zero(4, 2)}) == 0.0);

  // n = k with the identity frame and D = diag(1, 2).
  const Point ident = gss::make_point(Manifold::stiefel(2, 2), Matrix::Identity(2, 2));
  const auto params = gss::build_benchmark_params(2, 2, gss::BenchmarkFamily::varying_n);
  CHECK(gss::vmf_stiefel_logp(ident, std::get<gss::VmfStiefelParams>(params)) ==
        doctest::Approx(3.0));

  Matrix f(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) f(i, j) = gss::standard_normal(rng);
  double elementwise = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) elementwise += f(i, j) * gamma.value(i, j);
  CHECK(gss::vmf_stiefel_logp(gamma, {f}) == doctest::Approx(elementwise).epsilon(1e-12));

  CHECK_THROWS_AS(gss::vmf_stiefel_logp(gamma, {Matrix::Zero(3, 2)}), gss::contract_error);
}

TEST_CASE("grassmann vmf log density is representative independent") {
  gss::Rng rng = gss::make_rng(302);
  const Point w = testutil::random_point(Manifold::grassmann(5, 2), rng);
  CHECK(gss::vmf_grassmann_logp(w, {Matrix::Zero(5, 5)}) == 0.0);
  CHECK(gss::vmf_grassmann_logp(w, {Matrix::Identity(5, 5)}) == doctest::Approx(2.0));

  Matrix g(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) g(i, j) = gss::standard_normal(rng);
  const auto params = gss::make_vmf_grassmann_params(g * g.transpose());
  const double reference = gss::vmf_grassmann_logp(w, params);
  for (int trial = 0; trial < 200; ++trial) {
    const Point rotated{w.manifold, w.value * random_orthogonal(2, rng)};
    CHECK(std::abs(gss::vmf_grassmann_logp(rotated, params) - reference) < 1e-10);
  }
}

TEST_CASE("grassmann vmf parameter validation") {
  Matrix asym(3, 3);
  asym << 1, 2, 0, 0, 1, 0, 0, 0, 1;
  CHECK_THROWS_AS(gss::make_vmf_grassmann_params(asym), gss::contract_error);
  Matrix negative = -Matrix::Identity(3, 3);
  CHECK_THROWS_AS(gss::make_vmf_grassmann_params(negative), gss::contract_error);
}

TEST_CASE("grassmann vmf gradient closed form and finite differences") {
  gss::Rng rng = gss::make_rng(303);
  const Point w = testutil::random_point(Manifold::grassmann(5, 2), rng);
  CHECK(gss::vmf_grassmann_euclid_grad(w, {Matrix::Zero(5, 5)}).cwiseAbs().maxCoeff() == 0.0);
  CHECK((gss::vmf_grassmann_euclid_grad(w, {Matrix::Identity(5, 5)}) - 2.0 * w.value)
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  const gss::Target target =
      gss::make_benchmark_target(5, 2, gss::BenchmarkFamily::grassmann_variance, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Point x = testutil::random_point(Manifold::grassmann(5, 2), rng);
    CHECK(max_gradient_relative_error(target, x, rng, 4) < 1e-4);
  }
}

TEST_CASE("every target with a gradient matches finite differences") {
  gss::Rng rng = gss::make_rng(304);
  const gss::Target stiefel = gss::make_benchmark_target(6, 2, gss::BenchmarkFamily::varying_n);
  for (int trial = 0; trial < 50; ++trial) {
    const Point x = testutil::random_point(stiefel.manifold, rng);
    CHECK(max_gradient_relative_error(stiefel, x, rng, 3) < 1e-4);
  }
  Vector mu = Vector::Zero(3);
  mu(0) = 1.0;
  const gss::Target sphere = gss::make_vmf_sphere_target(mu, 2.5);
  for (int trial = 0; trial < 50; ++trial) {
    const Point x = testutil::random_point(sphere.manifold, rng);
    CHECK(max_gradient_relative_error(sphere, x, rng, 3) < 1e-4);
  }
}

TEST_CASE("benchmark parameter families have the block structure") {
  const auto varying = gss::build_benchmark_params(30, 2, gss::BenchmarkFamily::varying_n);
  const Matrix& f = std::get<gss::VmfStiefelParams>(varying).f;
  CHECK(f(0, 0) == 1.0);
  CHECK(f(1, 1) == 2.0);
  CHECK(f.bottomRows(28).cwiseAbs().maxCoeff() == 0.0);

  const auto aniso = gss::build_benchmark_params(30, 2, gss::BenchmarkFamily::anisotropy, 100.0);
  const Matrix& fa = std::get<gss::VmfStiefelParams>(aniso).f;
  CHECK(fa(0, 0) == 1.0);
  CHECK(fa(1, 1) == 100.0);
  CHECK_THROWS_AS(gss::build_benchmark_params(30, 3, gss::BenchmarkFamily::anisotropy, 10.0),
                  gss::contract_error);

  const auto grass = gss::build_benchmark_params(3, 2, gss::BenchmarkFamily::grassmann_variance, 1.0);
  const Matrix& p = std::get<gss::VmfGrassmannParams>(grass).p;
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = 1.0;
  expected(1, 1) = 1.0;
  CHECK((p - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sphere vmf oracle produces unit vectors with the right mean resultant") {
  gss::Rng rng = gss::make_rng(305);
  Vector mu(3);
  mu << 0.0, 0.0, 1.0;

  // kappa = 0: uniform on the sphere, empirical mean near zero.
  Vector acc = Vector::Zero(3);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Vector x = gss::vmf_sphere_oracle_sample(mu, 0.0, rng);
    CHECK(std::abs(x.norm() - 1.0) < 1e-12);
    acc += x;
  }
  CHECK((acc / n).norm() <= 0.02);

  // kappa = 50, d = 3: E[mu^T x] = coth(kappa) - 1 / kappa.
  const double kappa = 50.0;
  double dot_acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector x = gss::vmf_sphere_oracle_sample(mu, kappa, rng);
    CHECK(std::abs(x.norm() - 1.0) < 1e-12);
    dot_acc += mu.dot(x);
  }
  const double expected = 1.0 / std::tanh(kappa) - 1.0 / kappa;
  CHECK(std::abs(dot_acc / n - expected) < 0.005);

  CHECK_THROWS_AS(gss::vmf_sphere_oracle_sample(mu, -1.0, rng), gss::contract_error);
  CHECK_THROWS_AS(gss::vmf_sphere_oracle_sample(2.0 * mu, 1.0, rng), gss::contract_error);
}

TEST_CASE("sphere vmf oracle matches the analytic cosine law by KS") {
  gss::Rng rng = gss::make_rng(306);
  Vector mu(3);
  mu << 1.0, 0.0, 0.0;
  const double kappa = 2.0;
  const int n = 100000;
  std::vector<double> cosines(n), oracle(n);
  for (int i = 0; i < n; ++i) cosines[i] = mu.dot(gss::vmf_sphere_oracle_sample(mu, kappa, rng));
  // In d = 3 the cosine has an exponential law on [-1, 1] with analytic
  // inverse cdf.
  for (int i = 0; i < n; ++i) {
    const double u = gss::uniform_open01(rng);
    oracle[i] =
        std::log(std::exp(-kappa) + u * (std::exp(kappa) - std::exp(-kappa))) / kappa;
  }
  CHECK(testutil::ks_two_sample_pvalue(cosines, oracle) > 0.01);
}
