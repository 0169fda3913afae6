#pragma once

// Geometric multigrid for the scalar operator tau M_0 + K_0 on a nested
// sequence of red-refined meshes.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <memory>
#include <span>
#include <vector>

#include "hx4d/mesh.hpp"
#include "hx4d/smoother.hpp"
#include "hx4d/sparse.hpp"

namespace hx4d {

/// Linear interpolation from `coarse` to `fine = bey_refine(coarse)`: identity
/// rows for inherited vertices, two entries of 1/2 for edge midpoints. Throws
/// std::invalid_argument if the meshes are not nested that way.
SparseMatrix prolongation(const Mesh4& coarse, const Mesh4& fine);

/// tau M_0 + K_0 assembled on one mesh.
SparseMatrix scalar_operator(const Mesh4& mesh, double tau);

class Hierarchy {
 public:
  /// Assembles tau M_0 + K_0 on every mesh. meshes[l+1] must be the red
  /// refinement of meshes[l].
  static Hierarchy build(std::span<const Mesh4> meshes, double tau);

  /// operators[l] on level l (0 = coarsest); prolongations[l-1] maps level
  /// l-1 to level l.
  Hierarchy(std::vector<std::shared_ptr<const SparseMatrix>> operators, std::vector<SparseMatrix> prolongations);

  int levels() const { return static_cast<int>(levels_.size()); }
  std::size_t size() const { return levels_.back().a->rows(); }
  const SparseMatrix& op(int level) const { return *levels_[static_cast<std::size_t>(level)].a; }
  const SparseMatrix& prolongation_to(int level) const { return levels_[static_cast<std::size_t>(level)].p; }
  const ChebySmoother& smoother(int level) const { return *levels_[static_cast<std::size_t>(level)].smoother; }

  /// One symmetric V(1,1) cycle with Chebyshev(3) smoothing and an exact
  /// coarse solve, from a zero initial guess.
  void vcycle(std::span<const double> b, std::span<double> x) const;

 private:
  struct Level {
    std::shared_ptr<const SparseMatrix> a;
    SparseMatrix p;
    SparseMatrix pt;
    std::unique_ptr<ChebySmoother> smoother;
  };
  void cycle(std::size_t level, std::span<const double> b, std::span<double> x) const;

  std::vector<Level> levels_;
  Eigen::LLT<Eigen::MatrixXd> coarse_;
};

/// Applies the V-cycle independently to each of the `components` blocks of a
/// component-major vector.
void b0_block_apply(const Hierarchy& h, int components, std::span<const double> v, std::span<double> out);

}  // namespace hx4d
