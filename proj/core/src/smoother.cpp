#include "hx4d/smoother.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hx4d {

double estimate_lambda_max(const SparseMatrix& a, std::span<const double> inv_diag, int iterations) {
  const std::size_t n = a.rows();
  Vector v(n), w(n);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  for (auto& x : v) x = dist(rng);
  double nv = norm2(v);
  for (auto& x : v) x /= nv;
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    a.apply(v, w);
    for (std::size_t i = 0; i < n; ++i) w[i] *= inv_diag[i];
    lambda = norm2(w);
    if (lambda == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / lambda;
  }
  return lambda;
}

namespace {

std::vector<double> jacobi(const SparseMatrix& a) {
  auto d = a.diagonal();
  for (auto& x : d) {
    if (!(x > 0.0)) throw std::invalid_argument("ChebySmoother: non-positive diagonal entry");
    x = 1.0 / x;
  }
  return d;
}

}  // namespace

ChebySmoother::ChebySmoother(std::shared_ptr<const SparseMatrix> a, int degree)
    : a_(std::move(a)), inv_diag_(jacobi(*a_)), degree_(degree) {
  const double lmax = estimate_lambda_max(*a_, inv_diag_);
  lower_ = lmax / 10.0;
  upper_ = 1.1 * lmax;
}

ChebySmoother::ChebySmoother(std::shared_ptr<const SparseMatrix> a, std::vector<double> inv_diag, double lower,
                             double upper, int degree)
    : a_(std::move(a)), inv_diag_(std::move(inv_diag)), lower_(lower), upper_(upper), degree_(degree) {
  if (!(lower > 0.0 && upper > lower)) throw std::invalid_argument("ChebySmoother: need 0 < lower < upper");
  if (inv_diag_.size() != a_->rows()) throw std::invalid_argument("ChebySmoother: scaling length mismatch");
}

void ChebySmoother::apply(std::span<const double> r, std::span<double> x) const {
  const std::size_t n = a_->rows();
  if (r.size() != n || x.size() != n) throw std::invalid_argument("ChebySmoother::apply: shape mismatch");
  const double theta = 0.5 * (upper_ + lower_);
  const double delta = 0.5 * (upper_ - lower_);
  const double sigma = theta / delta;
  double rho = 1.0 / sigma;
  Vector res(r.begin(), r.end()), d(n), ad(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = inv_diag_[i] * res[i] / theta;
    x[i] = 0.0;
  }
  for (int k = 0; k < degree_; ++k) {
    axpy(1.0, d, x);
    if (k + 1 == degree_) break;
    a_->apply(d, ad);
    axpy(-1.0, ad, res);
    const double rho_next = 1.0 / (2.0 * sigma - rho);
    const double c1 = rho_next * rho;
    const double c2 = 2.0 * rho_next / delta;
    for (std::size_t i = 0; i < n; ++i) d[i] = c1 * d[i] + c2 * inv_diag_[i] * res[i];
    rho = rho_next;
  }
}

}  // namespace hx4d
