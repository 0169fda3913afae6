#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hx4d/sparse.hpp"

namespace hx4d {

/// Largest eigenvalue of diag(inv_diag) * A by power iteration from a fixed
/// start vector.
double estimate_lambda_max(const SparseMatrix& a, std::span<const double> inv_diag, int iterations = 20);

/// Chebyshev polynomial smoother applied with a zero initial guess:
/// x = p(D^{-1} A) D^{-1} r, where 1 - lambda p(lambda) is the scaled
/// Chebyshev polynomial of the first kind on [lower, upper]. The induced
/// operator is symmetric and, for every positive spectrum, positive definite.
class ChebySmoother {
 public:
  /// Jacobi-scaled smoother on [lambda_max / 10, 1.1 lambda_max] with
  /// lambda_max from 20 power iterations.
  explicit ChebySmoother(std::shared_ptr<const SparseMatrix> a, int degree = 3);
  /// Explicit scaling and interval.
  ChebySmoother(std::shared_ptr<const SparseMatrix> a, std::vector<double> inv_diag, double lower, double upper,
                int degree = 3);

  void apply(std::span<const double> r, std::span<double> x) const;

  int degree() const { return degree_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  std::size_t size() const { return a_->rows(); }

 private:
  std::shared_ptr<const SparseMatrix> a_;
  std::vector<double> inv_diag_;
  double lower_ = 0.0;
  double upper_ = 0.0;
  int degree_ = 3;
};

}  // namespace hx4d
