#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace gss {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<double>;
using Vector = DenseVector<double>;

/// A documented precondition was violated (bad shapes, invalid arguments).
class contract_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical operation degenerated (rank-deficient projection, zero input).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The shrinkage loop exhausted its attempt budget.
class shrink_stall_error : public std::runtime_error {
 public:
  shrink_stall_error(long attempts, const std::string& what)
      : std::runtime_error(what), attempts_(attempts) {}
  long attempts() const noexcept { return attempts_; }

 private:
  long attempts_;
};

}  // namespace gss
