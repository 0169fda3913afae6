#include "hx4d/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hx4d {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                           std::vector<std::uint32_t> col_ids, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      offsets_(std::move(row_offsets)),
      cols_ids_(std::move(col_ids)),
      values_(std::move(values)) {
  if (offsets_.size() != rows_ + 1 || cols_ids_.size() != values_.size() ||
      offsets_.back() != values_.size()) {
    throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
  }
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> off(n + 1);
  std::iota(off.begin(), off.end(), std::size_t{0});
  std::vector<std::uint32_t> cols(n);
  std::iota(cols.begin(), cols.end(), 0u);
  return {n, n, std::move(off), std::move(cols), std::vector<double>(n, 1.0)};
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto first = cols_ids_.begin() + static_cast<std::ptrdiff_t>(offsets_[r]);
  const auto last = cols_ids_.begin() + static_cast<std::ptrdiff_t>(offsets_[r + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(c));
  if (it == last || *it != c) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_ids_.begin())];
}

void SparseMatrix::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) {
    throw std::invalid_argument("SparseMatrix::apply: shape mismatch");
  }
  const std::size_t* off = offsets_.data();
  const std::uint32_t* ci = cols_ids_.data();
  const double* v = values_.data();
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t p = off[r]; p < off[r + 1]; ++p) s += v[p] * x[ci[p]];
    y[r] = s;
  }
}

void SparseMatrix::apply_transpose(std::span<const double> x, std::span<double> y) const {
  if (x.size() != rows_ || y.size() != cols_) {
    throw std::invalid_argument("SparseMatrix::apply_transpose: shape mismatch");
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double xr = x[r];
    for (std::size_t p = offsets_[r]; p < offsets_[r + 1]; ++p) y[cols_ids_[p]] += values_[p] * xr;
  }
}

Vector SparseMatrix::operator*(std::span<const double> x) const {
  Vector y(rows_);
  apply(x, y);
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::size_t> off(cols_ + 1, 0);
  for (auto c : cols_ids_) ++off[c + 1];
  std::partial_sum(off.begin(), off.end(), off.begin());
  std::vector<std::uint32_t> ci(nnz());
  std::vector<double> v(nnz());
  std::vector<std::size_t> next(off.begin(), off.end() - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = offsets_[r]; p < offsets_[r + 1]; ++p) {
      const std::size_t dst = next[cols_ids_[p]]++;
      ci[dst] = static_cast<std::uint32_t>(r);
      v[dst] = values_[p];
    }
  }
  return {cols_, rows_, std::move(off), std::move(ci), std::move(v)};
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t r = 0; r < d.size(); ++r) d[r] = at(r, r);
  return d;
}

SparseMatrix SparseMatrix::add(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("SparseMatrix::add: shape mismatch");
  std::vector<std::size_t> off(a.rows_ + 1, 0);
  std::vector<std::uint32_t> ci;
  std::vector<double> v;
  ci.reserve(std::max(a.nnz(), b.nnz()));
  v.reserve(ci.capacity());
  for (std::size_t r = 0; r < a.rows_; ++r) {
    std::size_t p = a.offsets_[r], q = b.offsets_[r];
    const std::size_t pe = a.offsets_[r + 1], qe = b.offsets_[r + 1];
    auto push = [&](std::uint32_t c, double x) {
      if (x != 0.0) {
        ci.push_back(c);
        v.push_back(x);
      }
    };
    while (p < pe || q < qe) {
      if (q == qe || (p < pe && a.cols_ids_[p] < b.cols_ids_[q])) {
        push(a.cols_ids_[p], alpha * a.values_[p]);
        ++p;
      } else if (p == pe || b.cols_ids_[q] < a.cols_ids_[p]) {
        push(b.cols_ids_[q], beta * b.values_[q]);
        ++q;
      } else {
        push(a.cols_ids_[p], alpha * a.values_[p] + beta * b.values_[q]);
        ++p;
        ++q;
      }
    }
    off[r + 1] = v.size();
  }
  return {a.rows_, a.cols_, std::move(off), std::move(ci), std::move(v)};
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("SparseMatrix::multiply: shape mismatch");
  std::vector<std::size_t> off(a.rows_ + 1, 0);
  std::vector<std::uint32_t> ci;
  std::vector<double> v;
  std::vector<double> acc(b.cols_, 0.0);
  std::vector<char> used(b.cols_, 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t r = 0; r < a.rows_; ++r) {
    touched.clear();
    for (std::size_t p = a.offsets_[r]; p < a.offsets_[r + 1]; ++p) {
      const std::size_t k = a.cols_ids_[p];
      for (std::size_t q = b.offsets_[k]; q < b.offsets_[k + 1]; ++q) {
        const auto c = b.cols_ids_[q];
        if (!used[c]) {
          used[c] = 1;
          touched.push_back(c);
        }
        acc[c] += a.values_[p] * b.values_[q];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto c : touched) {
      if (acc[c] != 0.0) {
        ci.push_back(c);
        v.push_back(acc[c]);
      }
      acc[c] = 0.0;
      used[c] = 0;
    }
    off[r + 1] = v.size();
  }
  return {a.rows_, b.cols_, std::move(off), std::move(ci), std::move(v)};
}

void TripletBuilder::reserve(std::size_t n) {
  r_.reserve(n);
  c_.reserve(n);
  v_.reserve(n);
}

void TripletBuilder::add(std::size_t r, std::size_t c, double v) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("TripletBuilder::add: index outside shape");
  r_.push_back(static_cast<std::uint32_t>(r));
  c_.push_back(static_cast<std::uint32_t>(c));
  v_.push_back(v);
}

SparseMatrix TripletBuilder::finalize() const {
  // Stable bucket sort by row, then stable sort by column within each row.
  std::vector<std::size_t> start(rows_ + 1, 0);
  for (auto r : r_) ++start[r + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<std::size_t> order(r_.size());
  {
    std::vector<std::size_t> next(start.begin(), start.end() - 1);
    for (std::size_t t = 0; t < r_.size(); ++t) order[next[r_[t]]++] = t;
  }
  std::vector<std::size_t> off(rows_ + 1, 0);
  std::vector<std::uint32_t> ci;
  std::vector<double> vals;
  ci.reserve(r_.size() / 2);
  vals.reserve(r_.size() / 2);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto first = order.begin() + static_cast<std::ptrdiff_t>(start[r]);
    auto last = order.begin() + static_cast<std::ptrdiff_t>(start[r + 1]);
    std::stable_sort(first, last, [&](std::size_t a, std::size_t b) { return c_[a] < c_[b]; });
    for (auto it = first; it != last;) {
      const auto col = c_[*it];
      double s = 0.0;
      for (; it != last && c_[*it] == col; ++it) s += v_[*it];
      if (s != 0.0) {
        ci.push_back(col);
        vals.push_back(s);
      }
    }
    off[r + 1] = vals.size();
  }
  return {rows_, cols_, std::move(off), std::move(ci), std::move(vals)};
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  const auto off = m.row_offsets();
  const auto ci = m.col_ids();
  const auto v = m.values();
  out << std::setprecision(17);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t p = off[r]; p < off[r + 1]; ++p) out << r + 1 << ' ' << ci[p] + 1 << ' ' << v[p] << '\n';
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    throw std::runtime_error("read_matrix_market: missing banner");
  }
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream header(line);
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(header >> rows >> cols >> nnz)) throw std::runtime_error("read_matrix_market: bad size line");
  TripletBuilder b(rows, cols);
  b.reserve(nnz);
  for (std::size_t t = 0; t < nnz; ++t) {
    std::size_t r = 0, c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v) || r == 0 || c == 0) throw std::runtime_error("read_matrix_market: bad entry");
    b.add(r - 1, c - 1, v);
  }
  return b.finalize();
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace hx4d
