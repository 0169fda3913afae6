#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hx4d {

using Vector = std::vector<double>;

/// Compressed sparse row matrix. Column ids are sorted and unique within a
/// row and no explicit zeros are stored.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
               std::vector<std::uint32_t> col_ids, std::vector<double> values);

  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return offsets_; }
  std::span<const std::uint32_t> col_ids() const { return cols_ids_; }
  std::span<const double> values() const { return values_; }

  /// Entry lookup by binary search; zero when not stored.
  double at(std::size_t r, std::size_t c) const;

  /// y = A x. Throws std::invalid_argument on shape mismatch.
  void apply(std::span<const double> x, std::span<double> y) const;
  /// y = A^T x.
  void apply_transpose(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;

  SparseMatrix transpose() const;
  std::vector<double> diagonal() const;

  /// Compressed sum alpha*A + beta*B with identical shape.
  static SparseMatrix add(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);
  /// Product A * B.
  static SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> cols_ids_;
  std::vector<double> values_;
};

/// Accumulates (row, col, value) contributions. finalize() sums duplicates in
/// insertion order, so the result depends only on the order of add() calls.
class TripletBuilder {
 public:
  TripletBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  void reserve(std::size_t n);
  void add(std::size_t r, std::size_t c, double v);
  SparseMatrix finalize() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint32_t> r_;
  std::vector<std::uint32_t> c_;
  std::vector<double> v_;
};

/// Matrix Market coordinate/real/general output with 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);
SparseMatrix read_matrix_market(std::istream& in);

// Dense vector helpers used by the solvers.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace hx4d
