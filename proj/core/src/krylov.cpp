#include "hx4d/krylov.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <random>

namespace hx4d {

PcgResult pcg(const LinearOperator& a, const LinearOperator& b, std::span<const double> rhs, PcgOptions opts) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = a.size();
  if (b.size() != n || rhs.size() != n) throw std::invalid_argument("pcg: operator and right-hand side sizes differ");

  PcgResult out;
  auto& rep = out.report;
  out.x.assign(n, 0.0);
  const double bnorm = norm2(rhs);
  if (!std::isfinite(bnorm)) throw NumericError("pcg: non-finite right-hand side");
  rep.residual_history.push_back(bnorm == 0.0 ? 0.0 : 1.0);
  if (bnorm == 0.0) {
    rep.converged = true;
    return out;
  }

  Vector r(rhs.begin(), rhs.end());
  Vector z(n), p(n), q(n);
  b.apply(r, z);
  double rho = dot(r, z);
  if (!std::isfinite(rho)) throw NumericError("pcg: non-finite preconditioned residual");
  if (rho <= 0.0) throw SpdViolation("pcg: <B r, r> <= 0 at iteration 0");
  p = z;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    a.apply(p, q);
    const double pq = dot(p, q);
    if (!std::isfinite(pq)) throw NumericError("pcg: non-finite operator application");
    if (pq <= 0.0) throw SpdViolation("pcg: <A p, p> <= 0 at iteration " + std::to_string(it));
    const double alpha = rho / pq;
    axpy(alpha, p, out.x);
    axpy(-alpha, q, r);
    rep.alpha.push_back(alpha);
    rep.iterations = it;
    const double rel = norm2(r) / bnorm;
    rep.residual_history.push_back(rel);
    if (!std::isfinite(rel)) throw NumericError("pcg: non-finite residual");
    if (rel <= opts.tol) {
      rep.converged = true;
      break;
    }
    if (it == opts.max_iterations) break;
    b.apply(r, z);
    const double rho_next = dot(r, z);
    if (!std::isfinite(rho_next)) throw NumericError("pcg: non-finite preconditioned residual");
    if (rho_next <= 0.0) throw SpdViolation("pcg: <B r, r> <= 0 at iteration " + std::to_string(it));
    const double beta = rho_next / rho;
    rep.beta.push_back(beta);
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rho = rho_next;
  }

  Vector ax(n);
  a.apply(out.x, ax);
  for (std::size_t i = 0; i < n; ++i) ax[i] = rhs[i] - ax[i];
  rep.relative_residual = norm2(ax) / bnorm;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SpectrumEstimate lanczos_extremes(const SolveReport& report) {
  const std::size_t m = report.alpha.size();
  SpectrumEstimate est;
  est.steps = static_cast<int>(m);
  if (m == 0) return est;
  Eigen::VectorXd diag(static_cast<Eigen::Index>(m));
  Eigen::VectorXd off(static_cast<Eigen::Index>(m > 1 ? m - 1 : 0));
  for (std::size_t j = 0; j < m; ++j) {
    double d = 1.0 / report.alpha[j];
    if (j > 0) d += report.beta[j - 1] / report.alpha[j - 1];
    diag(static_cast<Eigen::Index>(j)) = d;
    if (j + 1 < m) off(static_cast<Eigen::Index>(j)) = std::sqrt(report.beta[j]) / report.alpha[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  est.lambda_min = ev.minCoeff();
  est.lambda_max = ev.maxCoeff();
  est.kappa = est.lambda_max / est.lambda_min;
  return est;
}

SpectrumEstimate condition_estimate(const LinearOperator& a, const LinearOperator& b, int max_steps, double tol) {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector rhs(a.size());
  for (auto& v : rhs) v = dist(rng);
  const auto result = pcg(a, b, rhs, {tol, max_steps});
  return lanczos_extremes(result.report);
}

}  // namespace hx4d
