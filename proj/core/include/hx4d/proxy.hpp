#pragma once

// Proxies of differential forms on R^4: scalars for 0- and 4-forms, vectors
// for 1- and 3-forms, skew-symmetric 4x4 matrices for 2-forms.

#include <array>
#include <cstddef>
#include <span>
#include <variant>

namespace hx4d {

/// Four-component vector. Proxy of a 1-form or a 3-form.
struct Vec4 {
  std::array<double, 4> c{};

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  Vec4& operator+=(const Vec4& o) {
    for (std::size_t i = 0; i < 4; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec4& operator-=(const Vec4& o) {
    for (std::size_t i = 0; i < 4; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec4& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }
  friend Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
  friend Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
  friend Vec4 operator*(double s, Vec4 a) { return a *= s; }
  friend Vec4 operator-(Vec4 a) { return a *= -1.0; }
  friend bool operator==(const Vec4&, const Vec4&) = default;

  static constexpr Vec4 unit(std::size_t i) {
    Vec4 v;
    v.c[i] = 1.0;
    return v;
  }
};

double dot(const Vec4& a, const Vec4& b);
double norm(const Vec4& a);

/// Dense 4x4 matrix, row-major.
struct Mat4 {
  std::array<double, 16> a{};

  constexpr double& operator()(std::size_t i, std::size_t j) { return a[4 * i + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return a[4 * i + j]; }

  static Mat4 identity();
};

/// Skew-symmetric 4x4 matrix stored by its six upper entries in the order
/// (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
struct Skew4 {
  std::array<double, 6> upper{};

  /// Position of the pair (i, j), i < j, inside `upper`.
  static constexpr std::size_t pair_index(std::size_t i, std::size_t j) {
    // Offsets of the first pair in each row: 0, 3, 5.
    constexpr std::size_t row_start[3] = {0, 3, 5};
    return row_start[i] + (j - i - 1);
  }
  static constexpr std::array<std::array<std::size_t, 2>, 6> pairs{
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

  /// Entry (i, j) of the full antisymmetric matrix.
  double operator()(std::size_t i, std::size_t j) const;
  Mat4 to_matrix() const;

  Skew4& operator+=(const Skew4& o) {
    for (std::size_t i = 0; i < 6; ++i) upper[i] += o.upper[i];
    return *this;
  }
  Skew4& operator-=(const Skew4& o) {
    for (std::size_t i = 0; i < 6; ++i) upper[i] -= o.upper[i];
    return *this;
  }
  Skew4& operator*=(double s) {
    for (auto& x : upper) x *= s;
    return *this;
  }
  friend Skew4 operator+(Skew4 a, const Skew4& b) { return a += b; }
  friend Skew4 operator-(Skew4 a, const Skew4& b) { return a -= b; }
  friend Skew4 operator*(double s, Skew4 a) { return a *= s; }
  friend bool operator==(const Skew4&, const Skew4&) = default;
};

/// Sign of the permutation (i, j, k, l) of {0, 1, 2, 3}; zero on repeats.
/// Throws std::invalid_argument for indices outside [0, 4).
int levi_civita(int i, int j, int k, int l);

/// [u x v]_{ij} = sum_{k,l} eps_{ijkl} u_k v_l.
Skew4 cross(const Vec4& u, const Vec4& v);
/// kappa x eta = sum_{i<j} sum_{k<l} eps_{ijkl} kappa_{ij} eta_{kl}.
double cross(const Skew4& kappa, const Skew4& eta);
/// Matrix-vector product of the reconstructed skew matrix with v.
Vec4 skew_apply(const Skew4& kappa, const Vec4& v);
/// [K m]_{ij} = sum_{k,l} eps_{ijkl} m_{kl}.
Skew4 k_map(const Mat4& m);

/// Full Frobenius product of the reconstructed matrices (each upper entry counted twice).
double frobenius(const Skew4& a, const Skew4& b);
/// Sum over increasing pairs only: half the Frobenius product.
double pair_inner(const Skew4& a, const Skew4& b);

double det(const Vec4& c0, const Vec4& c1, const Vec4& c2, const Vec4& c3);

/// Proxy of a k-form, 0 <= k <= 4.
class FormProxy {
 public:
  using Payload = std::variant<double, Vec4, Skew4>;

  FormProxy() = default;
  /// Throws std::invalid_argument if the payload shape does not match the degree.
  FormProxy(int degree, Payload payload);

  static FormProxy scalar(int degree, double v) { return {degree, v}; }
  static FormProxy zero(int degree);

  int degree() const { return degree_; }
  const Payload& payload() const { return payload_; }

  double as_scalar() const { return std::get<double>(payload_); }
  const Vec4& as_vec() const { return std::get<Vec4>(payload_); }
  const Skew4& as_skew() const { return std::get<Skew4>(payload_); }

  FormProxy& operator+=(const FormProxy& o);
  FormProxy& operator*=(double s);
  friend FormProxy operator+(FormProxy a, const FormProxy& b) { return a += b; }
  friend FormProxy operator-(FormProxy a, const FormProxy& b) { return a += -1.0 * b; }
  friend FormProxy operator*(double s, FormProxy a) { return a *= s; }

 private:
  int degree_ = 0;
  Payload payload_ = 0.0;
};

/// Inner product of two proxies of equal degree. Skew proxies use the
/// increasing-pair sum, so the norm of a 2-form is the l2 norm of its six
/// components.
double inner(const FormProxy& a, const FormProxy& b);

/// Wedge product in proxy form. Throws std::invalid_argument if the degrees sum above 4.
FormProxy wedge(const FormProxy& phi, const FormProxy& eta);

/// Value of a k-form on k vectors. Throws std::invalid_argument if the number
/// of vectors differs from the degree.
double form_eval(const FormProxy& phi, std::span<const Vec4> vectors);

/// Number of components n_k of a k-form proxy: 1, 4, 6, 4, 1.
constexpr int component_count(int degree) {
  constexpr int n[5] = {1, 4, 6, 4, 1};
  return n[degree];
}

/// i-th component of a proxy in the canonical flat layout (Skew4 uses the
/// increasing-pair order).
double component(const FormProxy& p, int i);
FormProxy from_components(int degree, std::span<const double> values);

}  // namespace hx4d
