#include "gss/target.hpp"

#include <cmath>

namespace gss {

namespace {

void require_shape(const Point& x, const Matrix& param, const char* op) {
  if (x.value.rows() != param.rows())
    throw contract_error(std::string(op) + ": parameter shape does not match the point");
}

Matrix benchmark_f(int n, int k, const Vector& diag) {
  Matrix f = Matrix::Zero(n, k);
  f.topLeftCorner(k, k) = diag.asDiagonal();
  return f;
}

}  // namespace

VmfGrassmannParams make_vmf_grassmann_params(Matrix p) {
  if (p.rows() != p.cols()) throw contract_error("vmf_grassmann: P must be square");
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw contract_error("vmf_grassmann: P must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(p, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10)
    throw contract_error("vmf_grassmann: P must be positive semi-definite");
  return {std::move(p)};
}

double vmf_stiefel_logp(const Point& x, const VmfStiefelParams& params) {
  require_shape(x, params.f, "vmf_stiefel_logp");
  if (x.value.cols() != params.f.cols())
    throw contract_error("vmf_stiefel_logp: parameter shape does not match the point");
  return (params.f.array() * x.value.array()).sum();
}

double vmf_grassmann_logp(const Point& x, const VmfGrassmannParams& params) {
  require_shape(x, params.p, "vmf_grassmann_logp");
  return (x.value.transpose() * params.p * x.value).trace();
}

Matrix vmf_grassmann_euclid_grad(const Point& x, const VmfGrassmannParams& params) {
  require_shape(x, params.p, "vmf_grassmann_euclid_grad");
  return 2.0 * params.p * x.value;
}

Target make_vmf_stiefel_target(int n, int k, Matrix f) {
  if (f.rows() != n || f.cols() != k)
    throw contract_error("make_vmf_stiefel_target: F must be n x k");
  if (!f.allFinite()) throw contract_error("make_vmf_stiefel_target: F has non-finite entries");
  VmfStiefelParams params{std::move(f)};
  return Target{Manifold::stiefel(n, k),
                [params](const Point& x) { return vmf_stiefel_logp(x, params); },
                [params](const Point&) { return params.f; }};
}

Target make_vmf_grassmann_target(int n, int k, Matrix p) {
  if (p.rows() != n) throw contract_error("make_vmf_grassmann_target: P must be n x n");
  VmfGrassmannParams params = make_vmf_grassmann_params(std::move(p));
  return Target{Manifold::grassmann(n, k),
                [params](const Point& x) { return vmf_grassmann_logp(x, params); },
                [params](const Point& x) { return vmf_grassmann_euclid_grad(x, params); }};
}

Target make_vmf_sphere_target(Vector mu, double kappa) {
  if (mu.size() < 2) throw contract_error("make_vmf_sphere_target: need ambient dimension >= 2");
  if (std::abs(mu.norm() - 1.0) > 1e-8)
    throw contract_error("make_vmf_sphere_target: mu must be a unit vector");
  if (kappa < 0.0) throw contract_error("make_vmf_sphere_target: kappa must be nonnegative");
  const int d = static_cast<int>(mu.size());
  return Target{Manifold::sphere(d - 1),
                [mu, kappa](const Point& x) { return kappa * mu.dot(x.value.col(0)); },
                [mu, kappa](const Point&) -> Matrix { return kappa * mu; }};
}

BenchmarkParams build_benchmark_params(int n, int k, BenchmarkFamily family, double lambda) {
  if (n < 1 || k < 1 || k > n) throw contract_error("build_benchmark_params: need 1 <= k <= n");
  switch (family) {
    case BenchmarkFamily::varying_n:
    case BenchmarkFamily::varying_k: {
      Vector diag(k);
      for (int i = 0; i < k; ++i) diag(i) = i + 1;
      return VmfStiefelParams{benchmark_f(n, k, diag)};
    }
    case BenchmarkFamily::anisotropy: {
      if (k != 2) throw contract_error("build_benchmark_params: anisotropy requires k == 2");
      Vector diag(2);
      diag << 1.0, lambda;
      return VmfStiefelParams{benchmark_f(n, k, diag)};
    }
    case BenchmarkFamily::grassmann_variance: {
      if (lambda < 0.0)
        throw contract_error("build_benchmark_params: grassmann_variance requires lambda >= 0");
      const Matrix f = benchmark_f(n, k, Vector::Constant(k, std::sqrt(lambda)));
      return make_vmf_grassmann_params(f * f.transpose());
    }
  }
  throw contract_error("build_benchmark_params: unknown family");
}

Target make_benchmark_target(int n, int k, BenchmarkFamily family, double lambda) {
  BenchmarkParams params = build_benchmark_params(n, k, family, lambda);
  if (auto* stiefel = std::get_if<VmfStiefelParams>(&params))
    return make_vmf_stiefel_target(n, k, std::move(stiefel->f));
  return make_vmf_grassmann_target(n, k, std::move(std::get<VmfGrassmannParams>(params).p));
}

Vector vmf_sphere_oracle_sample(const Vector& mu, double kappa, Rng& rng) {
  const int d = static_cast<int>(mu.size());
  if (d < 2) throw contract_error("vmf_sphere_oracle_sample: need ambient dimension >= 2");
  if (std::abs(mu.norm() - 1.0) > 1e-8)
    throw contract_error("vmf_sphere_oracle_sample: mu must be a unit vector");
  if (kappa < 0.0) throw contract_error("vmf_sphere_oracle_sample: kappa must be nonnegative");

  if (kappa == 0.0) {
    Vector g(d);
    double norm = 0.0;
    do {
      for (int i = 0; i < d; ++i) g(i) = standard_normal(rng);
      norm = g.norm();
    } while (norm == 0.0);
    return g / norm;
  }

  // Envelope on the cosine w = mu^T x with a symmetric beta proposal.
  const double dm1 = static_cast<double>(d - 1);
  const double b = (-2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dm1 * dm1)) / dm1;
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + dm1 * std::log(1.0 - x0 * x0);
  std::gamma_distribution<double> gamma_half(dm1 / 2.0, 1.0);
  double w = 0.0;
  for (;;) {
    const double g1 = gamma_half(rng);
    const double g2 = gamma_half(rng);
    const double z = g1 / (g1 + g2);
    const double u = uniform_open01(rng);
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    if (kappa * w + dm1 * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }

  // Uniform direction in the hyperplane orthogonal to mu.
  Vector v(d);
  double norm = 0.0;
  do {
    for (int i = 0; i < d; ++i) v(i) = standard_normal(rng);
    v -= mu.dot(v) * mu;
    norm = v.norm();
  } while (norm == 0.0);
  v /= norm;
  return w * mu + std::sqrt(std::max(0.0, 1.0 - w * w)) * v;
}

}  // namespace gss
