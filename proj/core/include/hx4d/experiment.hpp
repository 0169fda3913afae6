#pragma once

// Manufactured-solution experiments on the unit tesseract: convergence tables
// and tau sweeps, with CSV and aligned-text output.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hx4d/auxiliary.hpp"
#include "hx4d/whitney.hpp"

namespace hx4d {

enum class Space { grad = 0, curl = 1, div4 = 2, div = 3 };
enum class PrecondKind { hx, variant_c, none };

constexpr int form_degree(Space s) { return static_cast<int>(s); }
std::string to_string(Space s);
std::string to_string(PrecondKind p);
/// Throws std::invalid_argument for unknown names.
Space parse_space(const std::string& name);
PrecondKind parse_precond(const std::string& name);

struct ManufacturedSolution {
  Field u;
  /// Exterior derivative of u: grad, Curl, Div or div.
  Field du;
};

/// Products of cos(pi x_i) and sin(pi x_i) used as exact solutions.
ManufacturedSolution manufactured_solution(Space space);

/// The 13 decades 1e-6 .. 1e6.
std::vector<double> tau_decades();

struct ExperimentConfig {
  Space space = Space::grad;
  int level_min = 0;
  int level_max = 3;
  std::vector<double> taus{1.0};
  double tol = 1e-6;
  int quad_degree = 5;
  PrecondKind precond = PrecondKind::hx;
  int max_iterations = 500;
  bool diagnostics = false;

  /// Throws std::invalid_argument for an inconsistent configuration.
  void validate() const;
};

struct TableRow {
  int level = 0;
  std::size_t elements = 0;
  std::size_t dofs = 0;
  double l2_error = 0.0;
  std::optional<double> eoc;
  int iterations = 0;
  double kappa = 0.0;
  bool converged = false;
  /// Solve residual of the Galerkin system, relative.
  double relative_residual = 0.0;
  HxDiagnostics diag;
};

struct LevelSolve {
  Vector x;
  SolveReport report;
  HxDiagnostics diag;
};

/// Assembles and solves tau M_k + K_k = F for the manufactured solution on the
/// finest mesh of `disc`.
LevelSolve solve_level(const Discretization& disc, Space space, double tau, PrecondKind precond, double tol,
                       int quad_degree, int max_iterations = 500);

/// Solves on levels level_min..level_max with tau = taus.front(). Failed
/// solves are flagged in the row and the run continues.
std::vector<TableRow> run_convergence(const ExperimentConfig& cfg, std::ostream* log = nullptr);

struct TauSweep {
  std::vector<int> levels;
  std::vector<double> taus;
  /// iterations[level index][tau index]
  std::vector<std::vector<int>> iterations;
  std::vector<std::vector<bool>> converged;

  bool all_converged() const;
};

TauSweep run_tau_sweep(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// CSV with header `level,elements,dof,l2_error,eoc,iters,kappa`; with
/// diagnostics, timing and inner-iteration columns are appended.
void write_csv(std::ostream& out, const std::vector<TableRow>& rows, bool diagnostics = false);
void write_text(std::ostream& out, const std::vector<TableRow>& rows);
/// CSV with header `level,<tau_1>,...,<tau_n>`.
void write_sweep_csv(std::ostream& out, const TauSweep& sweep);
void write_sweep_text(std::ostream& out, const TauSweep& sweep);

}  // namespace hx4d
