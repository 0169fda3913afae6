#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "hx4d/proxy.hpp"

namespace hx4d {

using Index = std::uint32_t;
using Pentatope = std::array<Index, 5>;

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Local k-subsimplices of a pentatope as ascending tuples of local vertex
/// positions, in lexicographic order. Counts are C(5, k+1).
std::span<const std::array<int, 5>> local_subsimplices(int k);
constexpr int local_subsimplex_count(int k) {
  constexpr int n[5] = {5, 10, 10, 5, 1};
  return n[k];
}

/// Deduplicated k-subsimplices with strictly ascending vertex tuples. Only the
/// first k+1 entries of each tuple are meaningful.
struct SubsimplexTable {
  int k = 0;
  std::vector<std::array<Index, 4>> vertices;
  /// For each element and each local k-subsimplex: global id and relative
  /// orientation (+1 or -1) of the element-local order against the global one.
  std::vector<Index> element_ids;
  std::vector<signed char> element_signs;

  std::size_t size() const { return vertices.size(); }
  Index id(std::size_t element, int local) const {
    return element_ids[element * static_cast<std::size_t>(local_subsimplex_count(k)) + static_cast<std::size_t>(local)];
  }
  int sign(std::size_t element, int local) const {
    return element_signs[element * static_cast<std::size_t>(local_subsimplex_count(k)) + static_cast<std::size_t>(local)];
  }
};

/// Conforming pentatope mesh. Elements are stored with ascending vertex ids;
/// `refinement_order` keeps the vertex order used by red refinement.
class Mesh4 {
 public:
  Mesh4() = default;
  /// Builds a mesh from coordinates and elements given in refinement order.
  Mesh4(std::vector<Vec4> vertices, std::vector<Pentatope> elements_in_refinement_order);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t element_count() const { return elements_.size(); }

  const std::vector<Vec4>& vertices() const { return vertices_; }
  const std::vector<Pentatope>& elements() const { return elements_; }
  const std::vector<Pentatope>& refinement_order() const { return refinement_order_; }
  /// Sign of det[a_1 - a_0, ..., a_4 - a_0] under the ascending order.
  int orientation(std::size_t e) const { return orientation_[e]; }

  /// k in 1..3; k = 0 is the vertex set itself.
  const SubsimplexTable& subsimplices(int k) const;
  std::size_t subsimplex_count(int k) const {
    return k == 0 ? vertex_count() : k == 4 ? element_count() : subsimplices(k).size();
  }

  friend bool operator==(const Mesh4& a, const Mesh4& b) {
    return a.vertices_ == b.vertices_ && a.elements_ == b.elements_ && a.refinement_order_ == b.refinement_order_;
  }

 private:
  std::vector<Vec4> vertices_;
  std::vector<Pentatope> elements_;
  std::vector<Pentatope> refinement_order_;
  std::vector<signed char> orientation_;
  std::array<SubsimplexTable, 3> tables_;
};

/// [0,1]^4 split into m^4 cubes of 24 Kuhn pentatopes each. Throws
/// std::invalid_argument when m == 0.
Mesh4 kuhn_unit_tesseract(unsigned m);

/// Red (Freudenthal) refinement: every element is replaced by 16 children
/// spanned by its vertices and edge midpoints. The midpoint of edge e gets
/// vertex id `vertex_count() + e`.
Mesh4 bey_refine(const Mesh4& mesh);

/// Meshes 0..levels obtained by repeated refinement of `coarse`.
std::vector<Mesh4> refine_hierarchy(const Mesh4& coarse, int levels);

/// Per-element geometry: volume, barycentric gradients and diameter.
struct GeomCache {
  std::vector<double> volume;
  std::vector<std::array<Vec4, 5>> gradients;
  std::vector<double> diameter;

  double total_volume() const;
  double max_diameter() const;
};

/// Throws MeshError for a degenerate element.
GeomCache geometry(const Mesh4& mesh);

/// Parity of the permutation sorting `local` into ascending order (+1 or -1).
int ordering_sign(std::span<const Index> local);

/// Text dump: `mesh4 <nv> <ne>`, nv coordinate lines, ne lines of 5 vertex ids.
void write_mesh(std::ostream& out, const Mesh4& mesh);
Mesh4 read_mesh(std::istream& in);

}  // namespace hx4d
