#pragma once

#include <cmath>
#include <utility>

#include "gss/types.hpp"

// Dense kernels used by the closed-form geodesics: skew-symmetric matrix
// exponential, compact QR and SVD with fixed sign conventions, and
// orthonormal completion. All of them are deterministic functions of their
// inputs and accept arbitrary Eigen expressions.

namespace gss {

namespace detail {

inline int expm_scaling_exponent(double norm1) {
  // The [13/13] Pade approximant is accurate up to ~5.37 in the 1-norm.
  constexpr double theta13 = 5.371920351148152;
  if (norm1 <= theta13) return 0;
  return static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
}

}  // namespace detail

/// exp(S) for skew-symmetric S, computed by scaling-and-squaring with a
/// fixed-order [13/13] Pade approximant. The result is a rotation:
/// orthogonal with determinant one.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> expm_skew(const Eigen::MatrixBase<Derived>& s_in) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseMatrix<Scalar>;
  const Mat s = s_in;
  if (s.rows() != s.cols()) throw contract_error("expm_skew: input must be square");
  const Eigen::Index n = s.rows();
  if (n == 0) return Mat(0, 0);
  if ((s + s.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw contract_error("expm_skew: input must be skew-symmetric");

  static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                             1187353796428800.,  129060195264000.,   10559470521600.,
                             670442572800.,      33522128640.,       1323241920.,
                             40840800.,          960960.,            16380.,
                             182.,               1.};
  const double norm1 = s.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return Mat::Identity(n, n);
  const int squarings = detail::expm_scaling_exponent(norm1);
  const Mat a = s / std::ldexp(1.0, squarings);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const Mat ident = Mat::Identity(n, n);
  const Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                     b[3] * a2 + b[1] * ident);
  const Mat v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  Mat e = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) e = e * e;
  return e;
}

template <typename Scalar>
struct QrFactors {
  DenseMatrix<Scalar> q;  // n x k, orthonormal columns
  DenseMatrix<Scalar> r;  // k x k, upper triangular, nonnegative diagonal
};

/// Compact QR factorization A = QR for A with rows >= cols. The sign
/// convention (nonnegative diagonal of R) makes the factorization a
/// deterministic function of A.
template <typename Derived>
QrFactors<typename Derived::Scalar> compact_qr(const Eigen::MatrixBase<Derived>& a_in) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseMatrix<Scalar>;
  const Mat a = a_in;
  const Eigen::Index n = a.rows();
  const Eigen::Index k = a.cols();
  if (n < k) throw contract_error("compact_qr: need rows >= cols");
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(n, k);
  Mat r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (r(j, j) < Scalar(0)) {
      r.row(j) = -r.row(j);
      q.col(j) = -q.col(j);
    }
  }
  return {std::move(q), std::move(r)};
}

template <typename Scalar>
struct SvdFactors {
  DenseMatrix<Scalar> u;                // n x k
  DenseVector<Scalar> singular_values;  // length k, nonincreasing, >= 0
  DenseMatrix<Scalar> v;                // k x k
};

/// Compact SVD A = U diag(d) V^T for A with rows >= cols. Singular values
/// below 1e-12 collapse to exact zeros so that downstream sin/cos terms of
/// the Grassmann geodesic degenerate cleanly.
template <typename Derived>
SvdFactors<typename Derived::Scalar> compact_svd(const Eigen::MatrixBase<Derived>& a_in) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseMatrix<Scalar>;
  const Mat a = a_in;
  if (a.rows() < a.cols()) throw contract_error("compact_svd: need rows >= cols");
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  DenseVector<Scalar> d = svd.singularValues();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) < Scalar(1e-12)) d(i) = Scalar(0);
  }
  return {svd.matrixU(), std::move(d), svd.matrixV()};
}

/// Orthonormal basis of the orthogonal complement of the column span of an
/// orthonormal n x k matrix. Returns an n x (n-k) matrix; zero columns when
/// k == n.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> orthonormal_complement(
    const Eigen::MatrixBase<Derived>& gamma_in) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseMatrix<Scalar>;
  const Mat gamma = gamma_in;
  const Eigen::Index n = gamma.rows();
  const Eigen::Index k = gamma.cols();
  if (k > n) throw contract_error("orthonormal_complement: more columns than rows");
  if (k > 0) {
    const Mat gram_defect = gamma.transpose() * gamma - Mat::Identity(k, k);
    if (gram_defect.cwiseAbs().maxCoeff() > 1e-8)
      throw contract_error("orthonormal_complement: input columns are not orthonormal");
  }
  if (k == n) return Mat(n, 0);
  Eigen::HouseholderQR<Mat> qr(gamma);
  const Mat q_full = qr.householderQ() * Mat::Identity(n, n);
  return q_full.rightCols(n - k);
}

}  // namespace gss
