#include "hx4d/proxy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hx4d {

namespace {

// Sign of a 4-tuple by counting inversions; 0 when an index repeats.
constexpr int permutation_sign(int i, int j, int k, int l) {
  const int v[4] = {i, j, k, l};
  int inversions = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      if (v[a] == v[b]) return 0;
      if (v[a] > v[b]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

struct EpsilonTable {
  signed char v[256]{};
  constexpr EpsilonTable() {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            v[((i * 4 + j) * 4 + k) * 4 + l] = static_cast<signed char>(permutation_sign(i, j, k, l));
  }
};

constexpr EpsilonTable kEpsilon{};

inline int eps(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
  return kEpsilon.v[((i * 4 + j) * 4 + k) * 4 + l];
}

}  // namespace

double dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }

Mat4 Mat4::identity() {
  Mat4 m;
  for (std::size_t i = 0; i < 4; ++i) m(i, i) = 1.0;
  return m;
}

double Skew4::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  if (i < j) return upper[pair_index(i, j)];
  return -upper[pair_index(j, i)];
}

Mat4 Skew4::to_matrix() const {
  Mat4 m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = (*this)(i, j);
  return m;
}

int levi_civita(int i, int j, int k, int l) {
  for (int x : {i, j, k, l}) {
    if (x < 0 || x > 3) {
      throw std::invalid_argument("levi_civita: index " + std::to_string(x) + " outside [0, 4)");
    }
  }
  return eps(i, j, k, l);
}

Skew4 cross(const Vec4& u, const Vec4& v) {
  Skew4 r;
  for (std::size_t p = 0; p < 6; ++p) {
    const auto [i, j] = Skew4::pairs[p];
    double s = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t l = 0; l < 4; ++l) s += eps(i, j, k, l) * u[k] * v[l];
    r.upper[p] = s;
  }
  return r;
}

double cross(const Skew4& kappa, const Skew4& eta) {
  double s = 0.0;
  for (std::size_t p = 0; p < 6; ++p) {
    const auto [i, j] = Skew4::pairs[p];
    for (std::size_t q = 0; q < 6; ++q) {
      const auto [k, l] = Skew4::pairs[q];
      s += eps(i, j, k, l) * kappa.upper[p] * eta.upper[q];
    }
  }
  return s;
}

Vec4 skew_apply(const Skew4& kappa, const Vec4& v) {
  Vec4 r;
  for (std::size_t i = 0; i < 4; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 4; ++j) s += kappa(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

Skew4 k_map(const Mat4& m) {
  Skew4 r;
  for (std::size_t p = 0; p < 6; ++p) {
    const auto [i, j] = Skew4::pairs[p];
    double s = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t l = 0; l < 4; ++l) s += eps(i, j, k, l) * m(k, l);
    r.upper[p] = s;
  }
  return r;
}

double pair_inner(const Skew4& a, const Skew4& b) {
  double s = 0.0;
  for (std::size_t p = 0; p < 6; ++p) s += a.upper[p] * b.upper[p];
  return s;
}

double frobenius(const Skew4& a, const Skew4& b) { return 2.0 * pair_inner(a, b); }

double det(const Vec4& c0, const Vec4& c1, const Vec4& c2, const Vec4& c3) {
  // Laplace expansion along the first column.
  const Vec4* cols[4] = {&c0, &c1, &c2, &c3};
  auto m = [&](std::size_t r, std::size_t c) { return (*cols[c])[r]; };
  auto minor3 = [&](std::size_t skip) {
    std::size_t rows[3];
    for (std::size_t r = 0, n = 0; r < 4; ++r)
      if (r != skip) rows[n++] = r;
    return m(rows[0], 1) * (m(rows[1], 2) * m(rows[2], 3) - m(rows[2], 2) * m(rows[1], 3)) -
           m(rows[1], 1) * (m(rows[0], 2) * m(rows[2], 3) - m(rows[2], 2) * m(rows[0], 3)) +
           m(rows[2], 1) * (m(rows[0], 2) * m(rows[1], 3) - m(rows[1], 2) * m(rows[0], 3));
  };
  double d = 0.0;
  for (std::size_t r = 0; r < 4; ++r) d += ((r % 2 == 0) ? 1.0 : -1.0) * m(r, 0) * minor3(r);
  return d;
}

FormProxy::FormProxy(int degree, Payload payload) : degree_(degree), payload_(std::move(payload)) {
  if (degree < 0 || degree > 4) {
    throw std::invalid_argument("FormProxy: degree " + std::to_string(degree) + " outside [0, 4]");
  }
  const bool ok = (degree == 0 || degree == 4)   ? std::holds_alternative<double>(payload_)
                  : (degree == 1 || degree == 3) ? std::holds_alternative<Vec4>(payload_)
                                                 : std::holds_alternative<Skew4>(payload_);
  if (!ok) throw std::invalid_argument("FormProxy: payload shape does not match degree");
}

FormProxy FormProxy::zero(int degree) {
  switch (degree) {
    case 0:
    case 4:
      return {degree, 0.0};
    case 1:
    case 3:
      return {degree, Vec4{}};
    case 2:
      return {degree, Skew4{}};
    default:
      throw std::invalid_argument("FormProxy::zero: degree outside [0, 4]");
  }
}

FormProxy& FormProxy::operator+=(const FormProxy& o) {
  if (o.degree_ != degree_) throw std::invalid_argument("FormProxy: adding forms of different degree");
  std::visit(
      [&](auto& mine) {
        using T = std::decay_t<decltype(mine)>;
        mine += std::get<T>(o.payload_);
      },
      payload_);
  return *this;
}

FormProxy& FormProxy::operator*=(double s) {
  std::visit([&](auto& mine) { mine *= s; }, payload_);
  return *this;
}

double inner(const FormProxy& a, const FormProxy& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("inner: degree mismatch");
  switch (a.degree()) {
    case 0:
    case 4:
      return a.as_scalar() * b.as_scalar();
    case 1:
    case 3:
      return dot(a.as_vec(), b.as_vec());
    default:
      return pair_inner(a.as_skew(), b.as_skew());
  }
}

FormProxy wedge(const FormProxy& phi, const FormProxy& eta) {
  const int k = phi.degree();
  const int l = eta.degree();
  if (k + l > 4) {
    throw std::invalid_argument("wedge: degree " + std::to_string(k) + " + " + std::to_string(l) +
                                " exceeds 4");
  }
  if (k == 0) return phi.as_scalar() * eta;
  if (l == 0) return eta.as_scalar() * phi;
  if (k == 1 && l == 1) return {2, cross(phi.as_vec(), eta.as_vec())};
  if (k == 1 && l == 2) return {3, skew_apply(eta.as_skew(), phi.as_vec())};
  if (k == 2 && l == 1) return {3, skew_apply(phi.as_skew(), eta.as_vec())};
  if (k == 1 && l == 3) return {4, dot(phi.as_vec(), eta.as_vec())};
  if (k == 3 && l == 1) return {4, -dot(phi.as_vec(), eta.as_vec())};
  return {4, cross(phi.as_skew(), eta.as_skew())};
}

double form_eval(const FormProxy& phi, std::span<const Vec4> v) {
  if (static_cast<int>(v.size()) != phi.degree()) {
    throw std::invalid_argument("form_eval: expected " + std::to_string(phi.degree()) +
                                " vectors, got " + std::to_string(v.size()));
  }
  switch (phi.degree()) {
    case 0:
      return phi.as_scalar();
    case 1:
      return dot(phi.as_vec(), v[0]);
    case 2:
      // Increasing-pair contraction; agrees with the determinant convention
      // used for degrees 3 and 4.
      return pair_inner(phi.as_skew(), cross(v[0], v[1]));
    case 3:
      return det(phi.as_vec(), v[0], v[1], v[2]);
    default:
      return phi.as_scalar() * det(v[0], v[1], v[2], v[3]);
  }
}

double component(const FormProxy& p, int i) {
  switch (p.degree()) {
    case 0:
    case 4:
      return p.as_scalar();
    case 1:
    case 3:
      return p.as_vec()[static_cast<std::size_t>(i)];
    default:
      return p.as_skew().upper[static_cast<std::size_t>(i)];
  }
}

FormProxy from_components(int degree, std::span<const double> values) {
  if (static_cast<int>(values.size()) != component_count(degree)) {
    throw std::invalid_argument("from_components: wrong component count");
  }
  switch (degree) {
    case 0:
    case 4:
      return {degree, values[0]};
    case 1:
    case 3: {
      Vec4 v;
      for (std::size_t i = 0; i < 4; ++i) v[i] = values[i];
      return {degree, v};
    }
    default: {
      Skew4 s;
      for (std::size_t i = 0; i < 6; ++i) s.upper[i] = values[i];
      return {degree, s};
    }
  }
}

}  // namespace hx4d
