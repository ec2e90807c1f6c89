#pragma once

#include <Eigen/Dense>

#include <vector>

namespace drlq {

/// Gaussian elimination with partial pivoting for small dense systems.
///
/// factor() returns false when a pivot falls below relative_tol * max|J|; the
/// factorization is unusable in that case.
class PivotedLU {
 public:
  bool factor(const Eigen::MatrixXd& matrix, double relative_tol = 1e-12);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd inverse() const;

  bool ok() const { return ok_; }
  /// Smallest pivot magnitude divided by max|J|.
  double min_relative_pivot() const { return min_relative_pivot_; }

 private:
  Eigen::MatrixXd lu_;
  std::vector<Eigen::Index> perm_;
  bool ok_ = false;
  double min_relative_pivot_ = 0.0;
};

}  // namespace drlq
