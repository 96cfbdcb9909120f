#pragma once

#include <functional>
#include <variant>

#include "gss/manifold.hpp"
#include "gss/rng.hpp"
#include "gss/types.hpp"

namespace gss {

/// Unnormalized target on a manifold. Only the log density is ever used;
/// the samplers never exponentiate it, so sharply concentrated targets do
/// not overflow. The ambient-coordinate gradient of the log density is
/// optional and only required by gradient-informed kernels.
struct Target {
  Manifold manifold;
  std::function<double(const Point&)> log_density;
  std::function<Matrix(const Point&)> euclid_grad_log_density;

  bool has_gradient() const { return static_cast<bool>(euclid_grad_log_density); }
};

/// von Mises-Fisher parameter on the Stiefel manifold: log p(Gamma) =
/// Tr(F^T Gamma).
struct VmfStiefelParams {
  Matrix f;
};

/// von Mises-Fisher parameter on the Grassmann manifold: log p(span Gamma)
/// = Tr(P Gamma Gamma^T) for symmetric positive semi-definite P. The value
/// only depends on the subspace, not the representative.
struct VmfGrassmannParams {
  Matrix p;
};

VmfGrassmannParams make_vmf_grassmann_params(Matrix p);

double vmf_stiefel_logp(const Point& x, const VmfStiefelParams& params);
double vmf_grassmann_logp(const Point& x, const VmfGrassmannParams& params);

/// Ambient gradient of the Grassmann vMF log density: 2 P Gamma.
Matrix vmf_grassmann_euclid_grad(const Point& x, const VmfGrassmannParams& params);

Target make_vmf_stiefel_target(int n, int k, Matrix f);
Target make_vmf_grassmann_target(int n, int k, Matrix p);

/// vMF on the sphere S^{d-1} in R^d: log p(x) = kappa * mu^T x.
Target make_vmf_sphere_target(Vector mu, double kappa);

/// The benchmark parameter families. All of them share the block shape
/// F = (D; 0) with a k x k diagonal D, and P = F F^T on the Grassmann side:
///  - varying_n / varying_k: D = diag(1, .., k);
///  - anisotropy(lambda): D = diag(1, lambda), requires k == 2;
///  - grassmann_variance(lambda): D = sqrt(lambda) * Id_k, Grassmann target.
enum class BenchmarkFamily { varying_n, varying_k, anisotropy, grassmann_variance };

using BenchmarkParams = std::variant<VmfStiefelParams, VmfGrassmannParams>;

BenchmarkParams build_benchmark_params(int n, int k, BenchmarkFamily family, double lambda = 1.0);

Target make_benchmark_target(int n, int k, BenchmarkFamily family, double lambda = 1.0);

/// Exact draw from the vMF density proportional to exp(kappa * mu^T x) on
/// the unit sphere in R^d, by the classic rejection scheme with a
/// beta-distributed envelope. kappa == 0 falls back to uniform sphere
/// sampling. Used as the ground-truth oracle in the verification suites and
/// by the sphere sanity benchmark.
Vector vmf_sphere_oracle_sample(const Vector& mu, double kappa, Rng& rng);

}  // namespace gss
