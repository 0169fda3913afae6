#pragma once

// Lowest-order Whitney spaces on pentatope meshes: basis evaluation,
// mass/stiffness assembly, discrete exterior derivatives, loads and errors.

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hx4d/mesh.hpp"
#include "hx4d/proxy.hpp"
#include "hx4d/quadrature.hpp"
#include "hx4d/sparse.hpp"

namespace hx4d {

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Analytic proxy field x -> p(x).
using Field = std::function<FormProxy(const Vec4&)>;

using Barycentric = std::array<double, 5>;
using Gradients = std::array<Vec4, 5>;

/// Local basis of degree k on one element, one proxy per local k-subsimplex
/// (lexicographic local order). Throws std::invalid_argument if the
/// barycentric point is not a convex combination.
std::vector<FormProxy> whitney_eval(int k, const Gradients& g, const Barycentric& lambda);

/// Constant exterior derivatives (degree k+1 proxies) of the local basis of
/// degree k, k in 0..3.
std::vector<FormProxy> whitney_derivative(int k, const Gradients& g);

/// Canonical degree of freedom of a constant k-form on the oriented simplex
/// spanned by `corners` (k+1 points, in orientation order).
double simplex_moment(const FormProxy& constant_form, std::span<const Vec4> corners);

class WhitneySpace {
 public:
  WhitneySpace(const Mesh4& mesh, const GeomCache& geom, int degree);

  int degree() const { return degree_; }
  std::size_t size() const { return mesh_->subsimplex_count(degree_); }
  const Mesh4& mesh() const { return *mesh_; }
  const GeomCache& geometry() const { return *geom_; }

  /// Global dof and sign of local basis function `local` on element `e`.
  Index dof(std::size_t e, int local) const;
  int sign(std::size_t e, int local) const;

  /// Global k-subsimplex vertex ids (first degree+1 entries).
  std::array<Index, 5> subsimplex(std::size_t dof) const;

  Vec4 point(std::size_t e, const Barycentric& lambda) const;

  /// Finite element function with coefficients `coeffs` at a point of element e.
  FormProxy evaluate(std::span<const double> coeffs, std::size_t e, const Barycentric& lambda) const;

 private:
  const Mesh4* mesh_;
  const GeomCache* geom_;
  int degree_;
};

/// Gram matrix of the global basis in the proxy inner product.
SparseMatrix assemble_mass(const WhitneySpace& space, const QuadratureRule& quad);
/// Gram matrix of the exterior derivatives of the basis.
SparseMatrix assemble_stiffness(const WhitneySpace& space);

/// Exterior derivative D_k from k-dofs to (k+1)-dofs, k in 0..2. Entries are
/// integers; throws AssemblyError if two elements disagree on an entry.
SparseMatrix derivative_matrix(const Mesh4& mesh, const GeomCache& geom, int k);

/// F_j = tau (u, phi_j) + (du, d phi_j).
Vector assemble_load(const WhitneySpace& space, const QuadratureRule& quad, const Field& u, const Field& du,
                     double tau);

/// L2 distance between the discrete function and u.
double l2_error(const WhitneySpace& space, std::span<const double> coeffs, const Field& u,
                const QuadratureRule& quad);

}  // namespace hx4d
