#pragma once

// Auxiliary space (Hiptmair-Xu) preconditioners for tau M_k + K_k, k = 1..3.
// All blocks act on algebraic residuals and return corrections:
//
//   B r = S_k r + Pi_k B0^{n_k} Pi_k^T r + tau^{-1} D_{k-1} B_{k-1} D_{k-1}^T r
//
// where S_k is a smoother on A_k, B0 the scalar multigrid applied per
// component, and B_{k-1} the potential-space preconditioner.

#include <memory>
#include <span>

#include "hx4d/discretization.hpp"
#include "hx4d/krylov.hpp"
#include "hx4d/linear_operator.hpp"
#include "hx4d/multigrid.hpp"
#include "hx4d/smoother.hpp"

namespace hx4d {

enum class SmootherKind {
  chebyshev,    ///< Chebyshev(3) on A_k with Jacobi scaling.
  scaled_mass,  ///< r / ((h^-2 + tau) diag(M_k)).
};

enum class PotentialForm {
  expanded,   ///< B_{k-1} = S_{k-1} + Pi_{k-1} B0 Pi_{k-1}^T (its own potential term cancels).
  recursive,  ///< B_{k-1} is the full preconditioner of degree k-1.
};

struct HxOptions {
  SmootherKind smoother = SmootherKind::chebyshev;
  PotentialForm potential = PotentialForm::expanded;
  /// Inner CG limits for the variant's singular potential solve.
  int inner_max_iterations = 50;
  double inner_tol = 1e-8;
};

/// Accumulated per-application statistics.
struct HxDiagnostics {
  int applications = 0;
  double smoother_seconds = 0.0;
  double nodal_seconds = 0.0;
  double potential_seconds = 0.0;
  int inner_iterations_total = 0;
  int inner_iterations_max = 0;
  int inner_cap_hits = 0;
};

class HxPreconditioner {
 public:
  /// Throws std::invalid_argument unless 1 <= k <= 3 and tau > 0. `b0` must be
  /// built on the same mesh hierarchy with the same tau.
  HxPreconditioner(const Discretization& disc, int k, double tau, std::shared_ptr<const Hierarchy> b0,
                   HxOptions opts = {});
  ~HxPreconditioner();
  HxPreconditioner(HxPreconditioner&&) noexcept;
  HxPreconditioner& operator=(HxPreconditioner&&) noexcept;

  int degree() const { return k_; }
  double tau() const { return tau_; }
  std::size_t size() const { return a_->rows(); }
  /// A_k = tau M_k + K_k.
  const SparseMatrix& system() const { return *a_; }
  std::shared_ptr<const SparseMatrix> system_ptr() const { return a_; }

  /// Additive preconditioner with the potential term.
  void apply(std::span<const double> r, std::span<double> z, HxDiagnostics* diag = nullptr) const;
  /// Smoother and nodal terms only.
  void apply_local(std::span<const double> r, std::span<double> z, HxDiagnostics* diag = nullptr) const;
  /// Variant whose third term solves tau K_{k-1} p = D_{k-1}^T r by plain CG
  /// from zero and returns D_{k-1} p.
  void apply_variant_c(std::span<const double> r, std::span<double> z, HxDiagnostics* diag = nullptr) const;

  /// Operator views; the preconditioner must outlive them.
  LinearOperator as_operator(HxDiagnostics* diag = nullptr) const;
  LinearOperator variant_c_operator(HxDiagnostics* diag = nullptr) const;
  LinearOperator system_operator() const { return LinearOperator::from_matrix(*a_); }

 private:
  void apply_smoother(std::span<const double> r, std::span<double> z) const;
  void apply_potential(std::span<const double> w, std::span<double> y) const;

  const Discretization* disc_;
  int k_;
  double tau_;
  HxOptions opts_;
  std::shared_ptr<const SparseMatrix> a_;
  std::shared_ptr<const Hierarchy> b0_;
  std::unique_ptr<ChebySmoother> cheby_;
  std::vector<double> scaled_mass_inv_;
  std::unique_ptr<HxPreconditioner> lower_;  // degree k-1 when k >= 2
};

/// Scalar multigrid as a LinearOperator (the degree-0 preconditioner).
LinearOperator multigrid_operator(const Hierarchy& h);

}  // namespace hx4d
