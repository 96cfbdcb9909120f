#include "gss/manifold.hpp"

#include <cmath>

#include "gss/linalg.hpp"

namespace gss {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require(bool ok, const char* message) {
  if (!ok) throw contract_error(message);
}

// Stiefel canonical inner product Tr(D1^T (I - Gamma Gamma^T / 2) D2).
double stiefel_inner(const Matrix& gamma, const Matrix& d1, const Matrix& d2) {
  const Matrix a = gamma.transpose() * d1;
  const Matrix b = gamma.transpose() * d2;
  return (d1.array() * d2.array()).sum() - 0.5 * (a.array() * b.array()).sum();
}

void require_same_base(const Tangent& u, const Tangent& v) {
  if (u.at.manifold != v.at.manifold ||
      (u.at.value - v.at.value).cwiseAbs().maxCoeff() > 1e-12)
    throw contract_error("tangent_inner: tangents have different base points");
}

}  // namespace

const char* to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::euclidean: return "euclidean";
    case ManifoldKind::sphere: return "sphere";
    case ManifoldKind::stiefel: return "stiefel";
    case ManifoldKind::grassmann: return "grassmann";
  }
  return "?";
}

Manifold Manifold::euclidean(int dim) {
  require(dim >= 1, "euclidean: dimension must be >= 1");
  return Manifold(ManifoldKind::euclidean, dim, 1);
}

Manifold Manifold::sphere(int dim) {
  require(dim >= 1, "sphere: dimension must be >= 1");
  return Manifold(ManifoldKind::sphere, dim + 1, 1);
}

Manifold Manifold::stiefel(int n, int k) {
  require(n >= 1 && k >= 1 && k <= n, "stiefel: need 1 <= k <= n");
  return Manifold(ManifoldKind::stiefel, n, k);
}

Manifold Manifold::grassmann(int n, int k) {
  require(n >= 1 && k >= 1 && k <= n, "grassmann: need 1 <= k <= n");
  return Manifold(ManifoldKind::grassmann, n, k);
}

int Manifold::intrinsic_dim() const {
  const int n = rows_;
  const int k = cols_;
  switch (kind_) {
    case ManifoldKind::euclidean: return n;
    case ManifoldKind::sphere: return n - 1;
    case ManifoldKind::stiefel: return k * (k - 1) / 2 + k * (n - k);
    case ManifoldKind::grassmann: return k * (n - k);
  }
  return 0;
}

std::string Manifold::describe() const {
  switch (kind_) {
    case ManifoldKind::euclidean: return "euclidean(" + std::to_string(rows_) + ")";
    case ManifoldKind::sphere: return "sphere(" + std::to_string(rows_ - 1) + ")";
    case ManifoldKind::stiefel:
      return "stiefel(" + std::to_string(rows_) + "," + std::to_string(cols_) + ")";
    case ManifoldKind::grassmann:
      return "grassmann(" + std::to_string(rows_) + "," + std::to_string(cols_) + ")";
  }
  return "?";
}

double constraint_violation(const Point& x) {
  switch (x.manifold.kind()) {
    case ManifoldKind::euclidean:
      return 0.0;
    case ManifoldKind::sphere:
      return std::abs(x.value.col(0).norm() - 1.0);
    case ManifoldKind::stiefel:
    case ManifoldKind::grassmann: {
      const int k = x.manifold.cols();
      return (x.value.transpose() * x.value - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
    }
  }
  return 0.0;
}

double tangency_violation(const Tangent& v) {
  const Matrix& x = v.at.value;
  switch (v.at.manifold.kind()) {
    case ManifoldKind::euclidean:
      return 0.0;
    case ManifoldKind::sphere:
      return std::abs(x.col(0).dot(v.value.col(0)));
    case ManifoldKind::stiefel: {
      const Matrix a = x.transpose() * v.value;
      return (a + a.transpose()).cwiseAbs().maxCoeff();
    }
    case ManifoldKind::grassmann:
      return (x.transpose() * v.value).cwiseAbs().maxCoeff();
  }
  return 0.0;
}

Point make_point(const Manifold& manifold, Matrix value, double tol) {
  if (value.rows() != manifold.rows() || value.cols() != manifold.cols())
    throw contract_error("make_point: value shape does not match the manifold");
  if (!value.allFinite()) throw contract_error("make_point: value has non-finite entries");
  Point x{manifold, std::move(value)};
  if (constraint_violation(x) > tol)
    throw contract_error("make_point: value violates the manifold constraint");
  return x;
}

Tangent make_tangent(const Point& at, Matrix value, double tol) {
  if (value.rows() != at.value.rows() || value.cols() != at.value.cols())
    throw contract_error("make_tangent: value shape does not match the base point");
  if (!value.allFinite()) throw contract_error("make_tangent: value has non-finite entries");
  Tangent v{at, std::move(value)};
  if (tangency_violation(v) > tol)
    throw contract_error("make_tangent: value is not tangent at the base point");
  return v;
}

void check_point(const Point& x, double tol) {
  if (x.value.rows() != x.manifold.rows() || x.value.cols() != x.manifold.cols())
    throw contract_error("check_point: value shape does not match the manifold");
  if (constraint_violation(x) > tol)
    throw contract_error("check_point: manifold constraint violated");
}

void check_tangent(const Tangent& v, double tol) {
  check_point(v.at, tol);
  if (v.value.rows() != v.at.value.rows() || v.value.cols() != v.at.value.cols())
    throw contract_error("check_tangent: value shape does not match the base point");
  if (tangency_violation(v) > tol)
    throw contract_error("check_tangent: tangency condition violated");
}

double tangent_inner(const Tangent& u, const Tangent& v) {
  require_same_base(u, v);
  switch (u.at.manifold.kind()) {
    case ManifoldKind::euclidean:
    case ManifoldKind::sphere:
    case ManifoldKind::grassmann:
      return (u.value.array() * v.value.array()).sum();
    case ManifoldKind::stiefel:
      return stiefel_inner(u.at.value, u.value, v.value);
  }
  return 0.0;
}

double tangent_norm(const Tangent& v) {
  switch (v.at.manifold.kind()) {
    case ManifoldKind::euclidean:
    case ManifoldKind::sphere:
    case ManifoldKind::grassmann:
      return v.value.norm();
    case ManifoldKind::stiefel:
      return std::sqrt(std::max(0.0, stiefel_inner(v.at.value, v.value, v.value)));
  }
  return 0.0;
}

GeodesicPath make_geodesic(const Point& x, const Tangent& v) {
  if (v.at.manifold != x.manifold || (v.at.value - x.value).cwiseAbs().maxCoeff() > 1e-12)
    throw contract_error("make_geodesic: tangent is not based at the given point");
  GeodesicPath path(x.manifold);
  path.base_ = x.value;
  switch (x.manifold.kind()) {
    case ManifoldKind::euclidean:
      path.dir_ = v.value;
      break;
    case ManifoldKind::sphere: {
      path.speed_ = v.value.norm();
      path.dir_ = path.speed_ > 0.0 ? Matrix(v.value / path.speed_) : Matrix(v.value);
      break;
    }
    case ManifoldKind::stiefel: {
      const int k = x.manifold.cols();
      Matrix pi = x.value.transpose() * v.value;
      pi = 0.5 * (pi - pi.transpose().eval());  // exact skew part
      const Matrix normal = v.value - x.value * (x.value.transpose() * v.value);
      auto qr = compact_qr(normal);
      path.q_factor_ = std::move(qr.q);
      Matrix gen = Matrix::Zero(2 * k, 2 * k);
      gen.topLeftCorner(k, k) = pi;
      gen.topRightCorner(k, k) = -qr.r.transpose();
      gen.bottomLeftCorner(k, k) = qr.r;
      path.generator_ = std::move(gen);
      break;
    }
    case ManifoldKind::grassmann: {
      auto svd = compact_svd(v.value);
      path.base_v_ = x.value * svd.v;
      path.u_hat_ = std::move(svd.u);
      path.v_hat_ = std::move(svd.v);
      path.sv_ = std::move(svd.singular_values);
      break;
    }
  }
  return path;
}

Point GeodesicPath::at(double theta) const {
  switch (manifold_.kind()) {
    case ManifoldKind::euclidean:
      return {manifold_, base_ + theta * dir_};
    case ManifoldKind::sphere: {
      if (speed_ == 0.0) return {manifold_, base_};
      const double phi = std::remainder(speed_ * theta, kTwoPi);
      return {manifold_, std::cos(phi) * base_ + std::sin(phi) * dir_};
    }
    case ManifoldKind::stiefel: {
      const int k = manifold_.cols();
      const Matrix e = expm_skew(theta * generator_);
      return {manifold_, base_ * e.topLeftCorner(k, k) + q_factor_ * e.bottomLeftCorner(k, k)};
    }
    case ManifoldKind::grassmann: {
      const Eigen::ArrayXd phase = sv_.array() * theta;
      const Matrix mixed =
          base_v_ * phase.cos().matrix().asDiagonal() + u_hat_ * phase.sin().matrix().asDiagonal();
      return {manifold_, mixed * v_hat_.transpose()};
    }
  }
  return {manifold_, base_};
}

std::pair<Point, Tangent> GeodesicPath::at_with_velocity(double theta) const {
  switch (manifold_.kind()) {
    case ManifoldKind::euclidean: {
      Point p{manifold_, base_ + theta * dir_};
      return {p, Tangent{p, dir_}};
    }
    case ManifoldKind::sphere: {
      if (speed_ == 0.0) {
        Point p{manifold_, base_};
        return {p, Tangent{p, Matrix::Zero(base_.rows(), base_.cols())}};
      }
      const double phi = std::remainder(speed_ * theta, kTwoPi);
      Point p{manifold_, std::cos(phi) * base_ + std::sin(phi) * dir_};
      Matrix vel = speed_ * (std::cos(phi) * dir_ - std::sin(phi) * base_);
      return {p, Tangent{p, std::move(vel)}};
    }
    case ManifoldKind::stiefel: {
      const int k = manifold_.cols();
      const Matrix e = expm_skew(theta * generator_);
      const Matrix coeff = e.leftCols(k);
      const Matrix dcoeff = generator_ * coeff;
      Point p{manifold_, base_ * coeff.topRows(k) + q_factor_ * coeff.bottomRows(k)};
      Matrix vel = base_ * dcoeff.topRows(k) + q_factor_ * dcoeff.bottomRows(k);
      return {p, Tangent{p, std::move(vel)}};
    }
    case ManifoldKind::grassmann: {
      const Eigen::ArrayXd phase = sv_.array() * theta;
      const Eigen::ArrayXd c = phase.cos();
      const Eigen::ArrayXd s = phase.sin();
      Point p{manifold_,
              (base_v_ * c.matrix().asDiagonal() + u_hat_ * s.matrix().asDiagonal()) *
                  v_hat_.transpose()};
      Matrix vel = (u_hat_ * (sv_.array() * c).matrix().asDiagonal() -
                    base_v_ * (sv_.array() * s).matrix().asDiagonal()) *
                   v_hat_.transpose();
      return {p, Tangent{p, std::move(vel)}};
    }
  }
  Point p{manifold_, base_};
  return {p, Tangent{p, Matrix::Zero(base_.rows(), base_.cols())}};
}

Tangent GeodesicPath::velocity(double theta) const { return at_with_velocity(theta).second; }

Point geodesic(const Point& x, const Tangent& unit_v, double theta) {
  if (!std::isfinite(theta)) throw contract_error("geodesic: theta must be finite");
  if (std::abs(tangent_norm(unit_v) - 1.0) > 1e-6)
    throw contract_error("geodesic: direction must have unit norm");
  return make_geodesic(x, unit_v).at(theta);
}

std::pair<Point, Tangent> geodesic_with_velocity(const Point& x, const Tangent& unit_v,
                                                 double theta) {
  if (!std::isfinite(theta)) throw contract_error("geodesic_with_velocity: theta must be finite");
  if (std::abs(tangent_norm(unit_v) - 1.0) > 1e-6)
    throw contract_error("geodesic_with_velocity: direction must have unit norm");
  return make_geodesic(x, unit_v).at_with_velocity(theta);
}

Tangent sample_tangent_gaussian(const Point& x, Rng& rng) {
  const Manifold& m = x.manifold;
  if (m.intrinsic_dim() == 0)
    throw contract_error("sample_tangent_gaussian: manifold has no tangent directions");
  switch (m.kind()) {
    case ManifoldKind::euclidean: {
      Matrix g(m.rows(), 1);
      for (int i = 0; i < m.rows(); ++i) g(i, 0) = standard_normal(rng);
      return {x, std::move(g)};
    }
    case ManifoldKind::sphere: {
      // An ambient Gaussian projected onto the tangent hyperplane is a
      // standard Gaussian in any orthonormal basis of that hyperplane.
      Matrix g(m.rows(), 1);
      for (int i = 0; i < m.rows(); ++i) g(i, 0) = standard_normal(rng);
      g -= x.value * (x.value.col(0).dot(g.col(0)));
      return {x, std::move(g)};
    }
    case ManifoldKind::stiefel: {
      // The upper-triangle entries of Pi and all entries of Sigma are
      // orthonormal coordinates for the canonical metric.
      const int n = m.rows();
      const int k = m.cols();
      Matrix pi = Matrix::Zero(k, k);
      for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
          const double g = standard_normal(rng);
          pi(i, j) = g;
          pi(j, i) = -g;
        }
      }
      Matrix sigma(n - k, k);
      for (int i = 0; i < n - k; ++i)
        for (int j = 0; j < k; ++j) sigma(i, j) = standard_normal(rng);
      const Matrix perp = orthonormal_complement(x.value);
      return {x, x.value * pi + perp * sigma};
    }
    case ManifoldKind::grassmann: {
      const int n = m.rows();
      const int k = m.cols();
      Matrix sigma(n - k, k);
      for (int i = 0; i < n - k; ++i)
        for (int j = 0; j < k; ++j) sigma(i, j) = standard_normal(rng);
      const Matrix perp = orthonormal_complement(x.value);
      return {x, perp * sigma};
    }
  }
  throw contract_error("sample_tangent_gaussian: unsupported manifold");
}

Tangent sample_unit_tangent(const Point& x, Rng& rng) {
  for (;;) {
    Tangent v = sample_tangent_gaussian(x, rng);
    const double norm = tangent_norm(v);
    if (norm > 0.0) {
      v.value /= norm;
      return v;
    }
  }
}

Point project(const Manifold& manifold, const Matrix& ambient) {
  if (ambient.rows() != manifold.rows() || ambient.cols() != manifold.cols())
    throw contract_error("project: ambient shape does not match the manifold");
  if (!ambient.allFinite()) throw contract_error("project: ambient value has non-finite entries");
  switch (manifold.kind()) {
    case ManifoldKind::euclidean:
      return {manifold, ambient};
    case ManifoldKind::sphere: {
      const double norm = ambient.col(0).norm();
      if (norm <= 1e-300) throw numeric_error("project: cannot normalize the zero vector");
      return {manifold, ambient / norm};
    }
    case ManifoldKind::stiefel:
    case ManifoldKind::grassmann: {
      auto svd = compact_svd(ambient);
      if (svd.singular_values(svd.singular_values.size() - 1) <= 0.0)
        throw numeric_error("project: ambient matrix is rank deficient");
      return {manifold, svd.u * svd.v.transpose()};
    }
  }
  throw contract_error("project: unsupported manifold");
}

std::pair<Point, Tangent> uturn(const Point& x, const Tangent& v, double alpha) {
  auto [point, vel] = make_geodesic(x, v).at_with_velocity(alpha);
  vel.value = -vel.value;
  return {point, std::move(vel)};
}

double projector_gap(const Point& a, const Point& b) {
  if (a.manifold != b.manifold) throw contract_error("projector_gap: manifolds differ");
  if (a.manifold.kind() == ManifoldKind::grassmann) {
    const Matrix pa = a.value * a.value.transpose();
    const Matrix pb = b.value * b.value.transpose();
    return (pa - pb).cwiseAbs().maxCoeff();
  }
  return (a.value - b.value).cwiseAbs().maxCoeff();
}

}  // namespace gss
