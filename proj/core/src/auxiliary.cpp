#include "hx4d/auxiliary.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace hx4d {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Plain CG on a symmetric positive semidefinite matrix from a zero start.
// Returns the iteration count; `hit_cap` is set when the tolerance was not met.
int plain_cg(const SparseMatrix& a, double scale, std::span<const double> b, std::span<double> x, int max_it,
             double tol, bool& hit_cap) {
  const std::size_t n = b.size();
  std::fill(x.begin(), x.end(), 0.0);
  hit_cap = false;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return 0;
  Vector r(b.begin(), b.end()), p(r), q(n);
  double rr = dot(r, r);
  for (int it = 1; it <= max_it; ++it) {
    a.apply(p, q);
    for (auto& v : q) v *= scale;
    const double pq = dot(p, q);
    if (!(pq > 0.0)) return it - 1;
    const double alpha = rr / pq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    const double rr_next = dot(r, r);
    if (std::sqrt(rr_next) <= tol * bnorm) return it;
    const double beta = rr_next / rr;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    rr = rr_next;
  }
  hit_cap = true;
  return max_it;
}

}  // namespace

HxPreconditioner::HxPreconditioner(const Discretization& disc, int k, double tau, std::shared_ptr<const Hierarchy> b0,
                                   HxOptions opts)
    : disc_(&disc), k_(k), tau_(tau), opts_(opts), b0_(std::move(b0)) {
  if (k < 1 || k > 3) throw std::invalid_argument("HxPreconditioner: degree must be 1, 2 or 3");
  if (!(tau > 0.0)) throw std::invalid_argument("HxPreconditioner: tau must be positive");
  if (!b0_ || b0_->size() != disc.mesh().vertex_count()) {
    throw std::invalid_argument("HxPreconditioner: scalar hierarchy does not match the finest mesh");
  }
  a_ = disc.system(k, tau);
  if (opts_.smoother == SmootherKind::chebyshev) {
    cheby_ = std::make_unique<ChebySmoother>(a_, 3);
  } else {
    const double h = disc.geometry().max_diameter();
    scaled_mass_inv_ = disc.mass(k).diagonal();
    for (auto& d : scaled_mass_inv_) d = 1.0 / ((1.0 / (h * h) + tau) * d);
  }
  if (k >= 2) lower_ = std::make_unique<HxPreconditioner>(disc, k - 1, tau, b0_, opts);
}

HxPreconditioner::~HxPreconditioner() = default;
HxPreconditioner::HxPreconditioner(HxPreconditioner&&) noexcept = default;
HxPreconditioner& HxPreconditioner::operator=(HxPreconditioner&&) noexcept = default;

void HxPreconditioner::apply_smoother(std::span<const double> r, std::span<double> z) const {
  if (cheby_) {
    cheby_->apply(r, z);
  } else {
    for (std::size_t i = 0; i < r.size(); ++i) z[i] = scaled_mass_inv_[i] * r[i];
  }
}

void HxPreconditioner::apply_local(std::span<const double> r, std::span<double> z, HxDiagnostics* diag) const {
  if (r.size() != size() || z.size() != size()) throw std::invalid_argument("HxPreconditioner: shape mismatch");
  auto t0 = Clock::now();
  apply_smoother(r, z);
  if (diag) diag->smoother_seconds += seconds_since(t0);

  t0 = Clock::now();
  const SparseMatrix& pi = disc_->interpolant(k_);
  Vector nodal(pi.cols()), corr(pi.cols()), back(size());
  disc_->interpolant_transpose(k_).apply(r, nodal);
  b0_block_apply(*b0_, component_count(k_), nodal, corr);
  pi.apply(corr, back);
  axpy(1.0, back, z);
  if (diag) diag->nodal_seconds += seconds_since(t0);
}

void HxPreconditioner::apply_potential(std::span<const double> w, std::span<double> y) const {
  if (k_ == 1) {
    b0_->vcycle(w, y);
  } else if (opts_.potential == PotentialForm::expanded) {
    lower_->apply_local(w, y);
  } else {
    lower_->apply(w, y);
  }
}

void HxPreconditioner::apply(std::span<const double> r, std::span<double> z, HxDiagnostics* diag) const {
  apply_local(r, z, diag);
  const auto t0 = Clock::now();
  const SparseMatrix& d = disc_->derivative(k_ - 1);
  Vector w(d.cols()), y(d.cols()), back(size());
  disc_->derivative_transpose(k_ - 1).apply(r, w);
  apply_potential(w, y);
  d.apply(y, back);
  axpy(1.0 / tau_, back, z);
  if (diag) {
    diag->potential_seconds += seconds_since(t0);
    ++diag->applications;
  }
}

void HxPreconditioner::apply_variant_c(std::span<const double> r, std::span<double> z, HxDiagnostics* diag) const {
  apply_local(r, z, diag);
  const auto t0 = Clock::now();
  const SparseMatrix& d = disc_->derivative(k_ - 1);
  Vector w(d.cols()), p(d.cols()), back(size());
  disc_->derivative_transpose(k_ - 1).apply(r, w);
  bool hit_cap = false;
  const int its = plain_cg(disc_->stiffness(k_ - 1), tau_, w, p, opts_.inner_max_iterations, opts_.inner_tol, hit_cap);
  d.apply(p, back);
  axpy(1.0, back, z);
  if (diag) {
    diag->potential_seconds += seconds_since(t0);
    ++diag->applications;
    diag->inner_iterations_total += its;
    diag->inner_iterations_max = std::max(diag->inner_iterations_max, its);
    if (hit_cap) ++diag->inner_cap_hits;
  }
}

LinearOperator HxPreconditioner::as_operator(HxDiagnostics* diag) const {
  return {size(), [this, diag](std::span<const double> r, std::span<double> z) { apply(r, z, diag); }};
}

LinearOperator HxPreconditioner::variant_c_operator(HxDiagnostics* diag) const {
  return {size(), [this, diag](std::span<const double> r, std::span<double> z) { apply_variant_c(r, z, diag); }};
}

LinearOperator multigrid_operator(const Hierarchy& h) {
  return {h.size(), [&h](std::span<const double> b, std::span<double> x) { h.vcycle(b, x); }};
}

}  // namespace hx4d
