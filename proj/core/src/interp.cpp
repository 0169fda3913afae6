#include "hx4d/interp.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "hx4d/whitney.hpp"

namespace hx4d {

namespace {

// For a field linear on the subsimplex, the average of the (constant-direction)
// moment equals the vertex average, so each row spreads the moment weight of
// every proxy component equally over the k+1 vertices.
SparseMatrix build_interpolant(const Mesh4& mesh, int k) {
  const std::size_t nv = mesh.vertex_count();
  const int ncomp = component_count(k);
  if (k == 0) return SparseMatrix::identity(nv);
  const auto& table = mesh.subsimplices(k);
  TripletBuilder b(table.size(), nv * static_cast<std::size_t>(ncomp));
  b.reserve(table.size() * static_cast<std::size_t>((k + 1) * ncomp));
  std::vector<double> unit(static_cast<std::size_t>(ncomp));
  for (std::size_t f = 0; f < table.size(); ++f) {
    std::array<Vec4, 4> corners{};
    for (int v = 0; v <= k; ++v) corners[static_cast<std::size_t>(v)] = mesh.vertices()[table.vertices[f][static_cast<std::size_t>(v)]];
    const std::span<const Vec4> cs(corners.data(), static_cast<std::size_t>(k + 1));
    std::array<double, 6> weight{};
    for (int c = 0; c < ncomp; ++c) {
      std::fill(unit.begin(), unit.end(), 0.0);
      unit[static_cast<std::size_t>(c)] = 1.0;
      weight[static_cast<std::size_t>(c)] = simplex_moment(from_components(k, unit), cs) / (k + 1);
    }
    // Columns in increasing order: component-major, then vertex id.
    for (int c = 0; c < ncomp; ++c)
      for (int v = 0; v <= k; ++v)
        b.add(f, static_cast<std::size_t>(c) * nv + table.vertices[f][static_cast<std::size_t>(v)], weight[static_cast<std::size_t>(c)]);
  }
  return b.finalize();
}

}  // namespace

SparseMatrix pi_grad_matrix(const Mesh4& mesh) { return build_interpolant(mesh, 0); }
SparseMatrix pi_curl_matrix(const Mesh4& mesh) { return build_interpolant(mesh, 1); }
SparseMatrix pi_div_matrix(const Mesh4& mesh) { return build_interpolant(mesh, 2); }
SparseMatrix pi_div4_matrix(const Mesh4& mesh) { return build_interpolant(mesh, 3); }

SparseMatrix interpolant_matrix(const Mesh4& mesh, int degree) {
  if (degree < 0 || degree > 3) throw std::invalid_argument("interpolant_matrix: degree outside [0, 3]");
  return build_interpolant(mesh, degree);
}

Vector pi_apply(const SparseMatrix& pi, std::span<const double> x) {
  if (x.size() != pi.cols()) throw std::invalid_argument("pi_apply: vector length does not match interpolant columns");
  return pi * x;
}

Vector pi_transpose_apply(const SparseMatrix& pi, std::span<const double> y) {
  if (y.size() != pi.rows()) throw std::invalid_argument("pi_transpose_apply: vector length does not match interpolant rows");
  Vector x(pi.cols());
  pi.apply_transpose(y, x);
  return x;
}

}  // namespace hx4d
