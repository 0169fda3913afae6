#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>

#include "hx4d/sparse.hpp"

namespace hx4d {

/// Square linear map y = Op(x) given by a callable. Composition of sparse
/// blocks happens inside the callable; products are never materialized.
class LinearOperator {
 public:
  using Apply = std::function<void(std::span<const double>, std::span<double>)>;

  LinearOperator() = default;
  LinearOperator(std::size_t size, Apply fn) : size_(size), fn_(std::move(fn)) {}

  /// Borrows the matrix; it must outlive the operator.
  static LinearOperator from_matrix(const SparseMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("LinearOperator: matrix is not square");
    return {m.rows(), [&m](std::span<const double> x, std::span<double> y) { m.apply(x, y); }};
  }
  static LinearOperator identity(std::size_t n) {
    return {n, [](std::span<const double> x, std::span<double> y) { std::copy(x.begin(), x.end(), y.begin()); }};
  }

  std::size_t size() const { return size_; }

  void apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != size_ || y.size() != size_) throw std::invalid_argument("LinearOperator::apply: shape mismatch");
    fn_(x, y);
  }
  Vector operator()(std::span<const double> x) const {
    Vector y(size_);
    apply(x, y);
    return y;
  }

 private:
  std::size_t size_ = 0;
  Apply fn_;
};

}  // namespace hx4d
