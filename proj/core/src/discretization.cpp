#include "hx4d/discretization.hpp"

#include <stdexcept>

#include "hx4d/interp.hpp"
#include "hx4d/quadrature.hpp"

namespace hx4d {

namespace {

void check_degree(int k, int hi, const char* what) {
  if (k < 0 || k > hi) throw std::invalid_argument(std::string("Discretization::") + what + ": degree out of range");
}

}  // namespace

Discretization::Discretization(std::vector<Mesh4> meshes) : meshes_(std::move(meshes)) {
  if (meshes_.empty()) throw std::invalid_argument("Discretization: no meshes");
  geom_ = hx4d::geometry(meshes_.back());
  for (std::size_t l = 1; l < meshes_.size(); ++l) prolongations_.push_back(prolongation(meshes_[l - 1], meshes_[l]));
}

template <class Fn>
const SparseMatrix& Discretization::cached(std::size_t slot, Fn&& build) const {
  std::call_once(flags_[slot], [&] { store_[slot] = build(); });
  return store_[slot];
}

const SparseMatrix& Discretization::mass(int k) const {
  check_degree(k, 3, "mass");
  return cached(static_cast<std::size_t>(k), [&] { return assemble_mass(space(k), gm_quadrature(2)); });
}

const SparseMatrix& Discretization::stiffness(int k) const {
  check_degree(k, 3, "stiffness");
  return cached(4 + static_cast<std::size_t>(k), [&] { return assemble_stiffness(space(k)); });
}

const SparseMatrix& Discretization::derivative(int k) const {
  check_degree(k, 2, "derivative");
  return cached(8 + static_cast<std::size_t>(k), [&] { return derivative_matrix(mesh(), geom_, k); });
}

const SparseMatrix& Discretization::derivative_transpose(int k) const {
  check_degree(k, 2, "derivative_transpose");
  return cached(11 + static_cast<std::size_t>(k), [&] { return derivative(k).transpose(); });
}

const SparseMatrix& Discretization::interpolant(int k) const {
  check_degree(k, 3, "interpolant");
  return cached(14 + static_cast<std::size_t>(k), [&] { return interpolant_matrix(mesh(), k); });
}

const SparseMatrix& Discretization::interpolant_transpose(int k) const {
  check_degree(k, 3, "interpolant_transpose");
  return cached(18 + static_cast<std::size_t>(k), [&] { return interpolant(k).transpose(); });
}

std::shared_ptr<const SparseMatrix> Discretization::system(int k, double tau) const {
  if (!(tau > 0.0)) throw std::invalid_argument("Discretization::system: tau must be positive");
  return std::make_shared<const SparseMatrix>(SparseMatrix::add(tau, mass(k), 1.0, stiffness(k)));
}

std::shared_ptr<const Hierarchy> Discretization::scalar_hierarchy(double tau) const {
  if (!(tau > 0.0)) throw std::invalid_argument("Discretization::scalar_hierarchy: tau must be positive");
  std::call_once(scalar_flag_, [&] {
    for (std::size_t l = 0; l + 1 < meshes_.size(); ++l) {
      const auto g = hx4d::geometry(meshes_[l]);
      const WhitneySpace s(meshes_[l], g, 0);
      scalar_levels_.emplace_back(assemble_mass(s, gm_quadrature(2)), assemble_stiffness(s));
    }
  });
  std::vector<std::shared_ptr<const SparseMatrix>> ops;
  for (const auto& [m, k] : scalar_levels_) ops.push_back(std::make_shared<const SparseMatrix>(SparseMatrix::add(tau, m, 1.0, k)));
  ops.push_back(system(0, tau));
  return std::make_shared<const Hierarchy>(std::move(ops), prolongations_);
}

}  // namespace hx4d
