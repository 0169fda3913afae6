#pragma once

#include <stdexcept>
#include <vector>

#include "hx4d/linear_operator.hpp"

namespace hx4d {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the preconditioned residual has a non-positive inner product
/// with the residual, or the search direction has non-positive energy.
class SpdViolation : public NumericError {
 public:
  using NumericError::NumericError;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  /// ||b - A x||_2 / ||b||_2 recomputed from the returned iterate.
  double relative_residual = 0.0;
  /// Recurrence residual norms, relative to ||b||, starting with iteration 0.
  std::vector<double> residual_history;
  /// CG step lengths alpha_j and direction updates beta_j, which define the
  /// Lanczos tridiagonal matrix of B A.
  std::vector<double> alpha;
  std::vector<double> beta;
  double seconds = 0.0;
};

struct PcgOptions {
  double tol = 1e-6;
  int max_iterations = 500;
};

struct PcgResult {
  Vector x;
  SolveReport report;
};

/// Preconditioned conjugate gradients from a zero initial guess, stopping on
/// the Euclidean residual ||b - A x|| <= tol ||b||.
PcgResult pcg(const LinearOperator& a, const LinearOperator& b, std::span<const double> rhs, PcgOptions opts = {});

struct SpectrumEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
  int steps = 0;
};

/// Extreme eigenvalues of the Lanczos tridiagonal matrix from PCG coefficients.
SpectrumEstimate lanczos_extremes(const SolveReport& report);

/// Ritz estimates of the spectrum of B A from a PCG run on a fixed
/// pseudo-random right-hand side, run to convergence (tol) or max_steps.
SpectrumEstimate condition_estimate(const LinearOperator& a, const LinearOperator& b, int max_steps = 200,
                                    double tol = 1e-10);

}  // namespace hx4d
