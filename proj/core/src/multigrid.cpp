#include "hx4d/multigrid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hx4d/quadrature.hpp"
#include "hx4d/whitney.hpp"

namespace hx4d {

SparseMatrix prolongation(const Mesh4& coarse, const Mesh4& fine) {
  const auto& edges = coarse.subsimplices(1);
  const std::size_t nc = coarse.vertex_count();
  if (fine.vertex_count() != nc + edges.size()) {
    throw std::invalid_argument("prolongation: fine mesh has " + std::to_string(fine.vertex_count()) +
                                " vertices, expected " + std::to_string(nc + edges.size()));
  }
  TripletBuilder b(fine.vertex_count(), nc);
  b.reserve(nc + 2 * edges.size());
  for (std::size_t v = 0; v < nc; ++v) {
    if (norm(fine.vertices()[v] - coarse.vertices()[v]) > 1e-12) {
      throw std::invalid_argument("prolongation: vertex " + std::to_string(v) + " moved between levels");
    }
    b.add(v, v, 1.0);
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& ev = edges.vertices[e];
    const Vec4 mid = 0.5 * (coarse.vertices()[ev[0]] + coarse.vertices()[ev[1]]);
    if (norm(fine.vertices()[nc + e] - mid) > 1e-12) {
      throw std::invalid_argument("prolongation: vertex " + std::to_string(nc + e) + " is not an edge midpoint");
    }
    b.add(nc + e, ev[0], 0.5);
    b.add(nc + e, ev[1], 0.5);
  }
  return b.finalize();
}

SparseMatrix scalar_operator(const Mesh4& mesh, double tau) {
  const auto geom = geometry(mesh);
  const WhitneySpace space(mesh, geom, 0);
  return SparseMatrix::add(tau, assemble_mass(space, gm_quadrature(2)), 1.0, assemble_stiffness(space));
}

Hierarchy Hierarchy::build(std::span<const Mesh4> meshes, double tau) {
  if (meshes.empty()) throw std::invalid_argument("Hierarchy::build: no meshes");
  std::vector<std::shared_ptr<const SparseMatrix>> ops;
  std::vector<SparseMatrix> prolongations;
  for (std::size_t l = 0; l < meshes.size(); ++l) {
    ops.push_back(std::make_shared<const SparseMatrix>(scalar_operator(meshes[l], tau)));
    if (l > 0) prolongations.push_back(prolongation(meshes[l - 1], meshes[l]));
  }
  return Hierarchy(std::move(ops), std::move(prolongations));
}

Hierarchy::Hierarchy(std::vector<std::shared_ptr<const SparseMatrix>> operators, std::vector<SparseMatrix> prolongations) {
  if (operators.empty() || prolongations.size() + 1 != operators.size()) {
    throw std::invalid_argument("Hierarchy: need one prolongation per level above the coarsest");
  }
  levels_.resize(operators.size());
  for (std::size_t l = 0; l < operators.size(); ++l) {
    auto& lev = levels_[l];
    lev.a = std::move(operators[l]);
    if (l > 0) {
      lev.p = std::move(prolongations[l - 1]);
      if (lev.p.rows() != lev.a->rows() || lev.p.cols() != levels_[l - 1].a->rows()) {
        throw std::invalid_argument("Hierarchy: prolongation shape does not match level operators");
      }
      lev.pt = lev.p.transpose();
      lev.smoother = std::make_unique<ChebySmoother>(lev.a, 3);
    }
  }
  const SparseMatrix& a0 = *levels_.front().a;
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a0.rows()), static_cast<Eigen::Index>(a0.cols()));
  const auto off = a0.row_offsets();
  const auto ci = a0.col_ids();
  const auto v = a0.values();
  for (std::size_t r = 0; r < a0.rows(); ++r)
    for (std::size_t p = off[r]; p < off[r + 1]; ++p) dense(static_cast<Eigen::Index>(r), ci[p]) = v[p];
  coarse_.compute(dense);
  if (coarse_.info() != Eigen::Success) throw std::invalid_argument("Hierarchy: coarse operator is not SPD");
}

void Hierarchy::vcycle(std::span<const double> b, std::span<double> x) const {
  if (b.size() != size() || x.size() != size()) throw std::invalid_argument("Hierarchy::vcycle: shape mismatch");
  cycle(levels_.size() - 1, b, x);
}

void Hierarchy::cycle(std::size_t l, std::span<const double> b, std::span<double> x) const {
  if (l == 0) {
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())) = coarse_.solve(rhs);
    return;
  }
  const Level& lev = levels_[l];
  const std::size_t n = b.size();
  const std::size_t nc = lev.p.cols();
  Vector r(n), t(n), rc(nc), xc(nc);

  lev.smoother->apply(b, x);
  lev.a->apply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  lev.pt.apply(r, rc);
  cycle(l - 1, rc, xc);
  lev.p.apply(xc, t);
  axpy(1.0, t, x);
  lev.a->apply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  lev.smoother->apply(r, t);
  axpy(1.0, t, x);
}

void b0_block_apply(const Hierarchy& h, int components, std::span<const double> v, std::span<double> out) {
  const std::size_t n = h.size();
  const std::size_t total = n * static_cast<std::size_t>(components);
  if (components < 1 || v.size() != total || out.size() != total) {
    throw std::invalid_argument("b0_block_apply: vector length is not components * vertex count");
  }
  for (std::size_t c = 0; c < static_cast<std::size_t>(components); ++c) h.vcycle(v.subspan(c * n, n), out.subspan(c * n, n));
}

}  // namespace hx4d
