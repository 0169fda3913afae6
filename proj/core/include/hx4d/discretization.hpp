#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <vector>

#include "hx4d/mesh.hpp"
#include "hx4d/multigrid.hpp"
#include "hx4d/sparse.hpp"
#include "hx4d/whitney.hpp"

namespace hx4d {

/// tau-independent matrices of the discrete de Rham complex on the finest
/// mesh of a nested hierarchy, plus the scalar operators on every level.
/// Each matrix is assembled on first use; access is thread-safe.
class Discretization {
 public:
  /// meshes[l+1] must be the red refinement of meshes[l].
  explicit Discretization(std::vector<Mesh4> meshes);

  const std::vector<Mesh4>& meshes() const { return meshes_; }
  const Mesh4& mesh() const { return meshes_.back(); }
  const GeomCache& geometry() const { return geom_; }
  WhitneySpace space(int k) const { return {mesh(), geom_, k}; }
  std::size_t dofs(int k) const { return mesh().subsimplex_count(k); }

  /// Mass and stiffness of degree k in 0..3.
  const SparseMatrix& mass(int k) const;
  const SparseMatrix& stiffness(int k) const;
  /// D_k for k in 0..2, and its transpose.
  const SparseMatrix& derivative(int k) const;
  const SparseMatrix& derivative_transpose(int k) const;
  /// Interpolant from the n_k-component Lagrange space, k in 0..3.
  const SparseMatrix& interpolant(int k) const;
  const SparseMatrix& interpolant_transpose(int k) const;

  /// tau M_k + K_k.
  std::shared_ptr<const SparseMatrix> system(int k, double tau) const;
  /// Scalar multigrid on tau M_0 + K_0 over all levels.
  std::shared_ptr<const Hierarchy> scalar_hierarchy(double tau) const;

 private:
  template <class Fn>
  const SparseMatrix& cached(std::size_t slot, Fn&& build) const;

  std::vector<Mesh4> meshes_;
  GeomCache geom_;
  std::vector<SparseMatrix> prolongations_;

  // Slots: mass 0-3, stiffness 4-7, derivative 8-10, derivative^T 11-13,
  // interpolant 14-17, interpolant^T 18-21.
  static constexpr std::size_t kSlots = 22;
  mutable std::array<std::once_flag, kSlots> flags_;
  mutable std::array<SparseMatrix, kSlots> store_;

  // Scalar mass/stiffness on the coarser levels.
  mutable std::once_flag scalar_flag_;
  mutable std::vector<std::pair<SparseMatrix, SparseMatrix>> scalar_levels_;
};

}  // namespace hx4d
