#pragma once

// Canonical interpolants from componentwise-linear Lagrange fields into the
// Whitney spaces. Lagrange product spaces are laid out component-major: entry
// c * vertex_count + v holds component c at vertex v.

#include <span>

#include "hx4d/mesh.hpp"
#include "hx4d/sparse.hpp"

namespace hx4d {

/// Vertex interpolant into degree 0 (the identity on vertex values).
SparseMatrix pi_grad_matrix(const Mesh4& mesh);
/// Edge averages of u . (a_j - a_i) for ascending edges (i, j).
SparseMatrix pi_curl_matrix(const Mesh4& mesh);
/// Triangle averages of omega : (a_j - a_i) x (a_k - a_i), pair-summed.
SparseMatrix pi_div_matrix(const Mesh4& mesh);
/// Tetrahedron averages of det[q, a_j - a_i, a_k - a_i, a_l - a_i].
SparseMatrix pi_div4_matrix(const Mesh4& mesh);

/// Interpolant into the Whitney space of the given degree (0..3).
SparseMatrix interpolant_matrix(const Mesh4& mesh, int degree);

/// Shape-checked products with an interpolant and its transpose.
Vector pi_apply(const SparseMatrix& pi, std::span<const double> x);
Vector pi_transpose_apply(const SparseMatrix& pi, std::span<const double> y);

}  // namespace hx4d
