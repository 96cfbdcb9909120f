#pragma once

#include <string>
#include <utility>

#include "gss/rng.hpp"
#include "gss/types.hpp"

namespace gss {

enum class ManifoldKind { euclidean, sphere, stiefel, grassmann };

const char* to_string(ManifoldKind kind);

/// Descriptor of a supported manifold. Points live in an ambient matrix
/// representation: column vectors for euclidean(d) and sphere(d) (the unit
/// sphere S^d in R^{d+1}), orthonormal n x k frames for stiefel(n, k) and
/// grassmann(n, k). Grassmann points are stored through a Stiefel
/// representative of the subspace; representatives are not unique.
class Manifold {
 public:
  static Manifold euclidean(int dim);
  static Manifold sphere(int dim);
  static Manifold stiefel(int n, int k);
  static Manifold grassmann(int n, int k);

  ManifoldKind kind() const { return kind_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int intrinsic_dim() const;
  std::string describe() const;

  bool operator==(const Manifold&) const = default;

 private:
  Manifold(ManifoldKind kind, int rows, int cols) : kind_(kind), rows_(rows), cols_(cols) {}

  ManifoldKind kind_;
  int rows_;
  int cols_;
};

struct Point {
  Manifold manifold;
  Matrix value;
};

struct Tangent {
  Point at;
  Matrix value;
};

/// Max-norm violation of the defining constraint (0 for euclidean points).
double constraint_violation(const Point& x);

/// Max-norm violation of the tangency conditions at the base point.
double tangency_violation(const Tangent& v);

Point make_point(const Manifold& manifold, Matrix value, double tol = 1e-8);
Tangent make_tangent(const Point& at, Matrix value, double tol = 1e-8);

void check_point(const Point& x, double tol = 1e-8);
void check_tangent(const Tangent& v, double tol = 1e-8);

/// Riemannian inner product of two tangents at the same base point.
/// Euclidean, sphere and grassmann use the trace inner product; stiefel uses
/// the canonical metric Tr(D1^T (I - Gamma Gamma^T / 2) D2).
double tangent_inner(const Tangent& u, const Tangent& v);
double tangent_norm(const Tangent& v);

/// Geodesic through one (point, tangent) pair with all factorizations
/// (QR + skew generator for stiefel, compact SVD for grassmann) computed
/// once, so evaluating many parameters costs only small dense products.
/// Accepts tangents of any norm; the curve is gamma_{(x, v)}.
class GeodesicPath {
 public:
  Point at(double theta) const;
  std::pair<Point, Tangent> at_with_velocity(double theta) const;
  Tangent velocity(double theta) const;
  const Manifold& manifold() const { return manifold_; }

 private:
  friend GeodesicPath make_geodesic(const Point& x, const Tangent& v);
  explicit GeodesicPath(Manifold m) : manifold_(m) {}

  Manifold manifold_;
  Matrix base_;       // x
  Matrix dir_;        // euclidean: v; sphere: v / |v|
  double speed_ = 0;  // sphere: g-norm of v
  Matrix generator_;  // stiefel: 2k x 2k skew [[Pi, -R^T], [R, 0]]
  Matrix q_factor_;   // stiefel: n x k Q of the normal component
  Matrix base_v_;     // grassmann: Gamma * Vhat
  Matrix u_hat_;      // grassmann: Uhat
  Matrix v_hat_;      // grassmann: Vhat
  Vector sv_;         // grassmann: singular values of the tangent
};

GeodesicPath make_geodesic(const Point& x, const Tangent& v);

/// gamma_{(x, v)}(theta) for a unit tangent v.
Point geodesic(const Point& x, const Tangent& unit_v, double theta);

/// (gamma(theta), dgamma/dt(theta)); the velocity is a tangent at the
/// returned point with the same norm as v.
std::pair<Point, Tangent> geodesic_with_velocity(const Point& x, const Tangent& unit_v,
                                                 double theta);

/// Standard Gaussian on the tangent space, drawn in metric-orthonormal
/// coordinates. Not normalized.
Tangent sample_tangent_gaussian(const Point& x, Rng& rng);

/// Uniform draw from the unit tangent sphere at x (Gaussian direction
/// divided by its metric norm).
Tangent sample_unit_tangent(const Point& x, Rng& rng);

/// Nearest-point projection onto the manifold: normalization for the
/// sphere, the orthogonal polar factor U V^T of the SVD for stiefel and
/// grassmann, identity for euclidean.
Point project(const Manifold& manifold, const Matrix& ambient);

/// Walk distance alpha along the geodesic, then flip the velocity:
/// (gamma(alpha), -dgamma/dt(alpha)).
std::pair<Point, Tangent> uturn(const Point& x, const Tangent& v, double alpha);

/// Representation-independent distance proxy between two points. For
/// grassmann this compares the orthogonal projectors Gamma Gamma^T, for the
/// other manifolds the raw values.
double projector_gap(const Point& a, const Point& b);

}  // namespace gss
