#include "hx4d/mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

namespace hx4d {

namespace {

std::vector<std::array<int, 5>> make_local(int k) {
  std::vector<std::array<int, 5>> out;
  const int size = k + 1;
  // Lexicographic combinations of {0..4} of the given size.
  std::array<int, 5> idx{};
  for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    int p = size - 1;
    while (p >= 0 && idx[static_cast<std::size_t>(p)] == 5 - size + p) --p;
    if (p < 0) break;
    ++idx[static_cast<std::size_t>(p)];
    for (int q = p + 1; q < size; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
  return out;
}

const std::array<std::vector<std::array<int, 5>>, 5>& local_tables() {
  static const std::array<std::vector<std::array<int, 5>>, 5> tables{make_local(0), make_local(1), make_local(2),
                                                                     make_local(3), make_local(4)};
  return tables;
}

double signed_volume_det(const std::vector<Vec4>& x, const Pentatope& p) {
  return det(x[p[1]] - x[p[0]], x[p[2]] - x[p[0]], x[p[3]] - x[p[0]], x[p[4]] - x[p[0]]);
}

SubsimplexTable build_table(const std::vector<Pentatope>& elements, int k) {
  SubsimplexTable t;
  t.k = k;
  const auto local = local_subsimplices(k);
  const std::size_t nloc = local.size();
  const std::size_t n = elements.size() * nloc;
  const std::size_t width = static_cast<std::size_t>(k) + 1;

  std::vector<std::array<Index, 4>> keys(n);
  for (std::size_t e = 0; e < elements.size(); ++e) {
    for (std::size_t l = 0; l < nloc; ++l) {
      std::array<Index, 4> key{};
      key.fill(0);
      for (std::size_t v = 0; v < width; ++v) key[v] = elements[e][static_cast<std::size_t>(local[l][v])];
      std::sort(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(width));
      keys[e * nloc + l] = key;
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  t.element_ids.assign(n, 0);
  t.element_signs.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& key = keys[order[i]];
    if (t.vertices.empty() || t.vertices.back() != key) t.vertices.push_back(key);
    t.element_ids[order[i]] = static_cast<Index>(t.vertices.size() - 1);
  }
  for (std::size_t e = 0; e < elements.size(); ++e) {
    for (std::size_t l = 0; l < nloc; ++l) {
      std::array<Index, 5> loc{};
      for (std::size_t v = 0; v < width; ++v) loc[v] = elements[e][static_cast<std::size_t>(local[l][v])];
      t.element_signs[e * nloc + l] = static_cast<signed char>(ordering_sign(std::span<const Index>(loc.data(), width)));
    }
  }
  return t;
}

}  // namespace

std::span<const std::array<int, 5>> local_subsimplices(int k) {
  if (k < 0 || k > 4) throw std::invalid_argument("local_subsimplices: k outside [0, 4]");
  return local_tables()[static_cast<std::size_t>(k)];
}

int ordering_sign(std::span<const Index> local) {
  int inversions = 0;
  for (std::size_t a = 0; a < local.size(); ++a)
    for (std::size_t b = a + 1; b < local.size(); ++b)
      if (local[a] > local[b]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

Mesh4::Mesh4(std::vector<Vec4> vertices, std::vector<Pentatope> elements_in_refinement_order)
    : vertices_(std::move(vertices)), refinement_order_(std::move(elements_in_refinement_order)) {
  elements_.reserve(refinement_order_.size());
  orientation_.reserve(refinement_order_.size());
  for (const auto& p : refinement_order_) {
    for (Index v : p) {
      if (v >= vertices_.size()) throw MeshError("Mesh4: vertex id " + std::to_string(v) + " out of range");
    }
    Pentatope s = p;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw MeshError("Mesh4: repeated vertex in element");
    const double d = signed_volume_det(vertices_, s);
    elements_.push_back(s);
    orientation_.push_back(static_cast<signed char>(d >= 0.0 ? 1 : -1));
  }
  for (int k = 1; k <= 3; ++k) tables_[static_cast<std::size_t>(k - 1)] = build_table(elements_, k);
}

const SubsimplexTable& Mesh4::subsimplices(int k) const {
  if (k < 1 || k > 3) throw std::invalid_argument("Mesh4::subsimplices: k outside [1, 3]");
  return tables_[static_cast<std::size_t>(k - 1)];
}

Mesh4 kuhn_unit_tesseract(unsigned m) {
  if (m == 0) throw std::invalid_argument("kuhn_unit_tesseract: m must be positive");
  const std::size_t n = m + 1;
  std::vector<Vec4> vertices;
  vertices.reserve(n * n * n * n);
  auto vid = [n](std::array<std::size_t, 4> i) {
    return static_cast<Index>(i[0] + n * (i[1] + n * (i[2] + n * i[3])));
  };
  for (std::size_t i3 = 0; i3 < n; ++i3)
    for (std::size_t i2 = 0; i2 < n; ++i2)
      for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t i0 = 0; i0 < n; ++i0)
          vertices.push_back(Vec4{{static_cast<double>(i0) / m, static_cast<double>(i1) / m,
                                   static_cast<double>(i2) / m, static_cast<double>(i3) / m}});

  std::vector<Pentatope> elements;
  elements.reserve(static_cast<std::size_t>(m) * m * m * m * 24);
  for (std::size_t c3 = 0; c3 < m; ++c3)
    for (std::size_t c2 = 0; c2 < m; ++c2)
      for (std::size_t c1 = 0; c1 < m; ++c1)
        for (std::size_t c0 = 0; c0 < m; ++c0) {
          std::array<int, 4> perm{0, 1, 2, 3};
          do {
            std::array<std::size_t, 4> corner{c0, c1, c2, c3};
            Pentatope p{};
            p[0] = vid(corner);
            for (std::size_t s = 0; s < 4; ++s) {
              ++corner[static_cast<std::size_t>(perm[s])];
              p[s + 1] = vid(corner);
            }
            elements.push_back(p);
          } while (std::next_permutation(perm.begin(), perm.end()));
        }
  return Mesh4(std::move(vertices), std::move(elements));
}

Mesh4 bey_refine(const Mesh4& mesh) {
  const auto& edges = mesh.subsimplices(1);
  const std::size_t nv = mesh.vertex_count();
  std::vector<Vec4> vertices = mesh.vertices();
  vertices.reserve(nv + edges.size());
  for (const auto& e : edges.vertices) vertices.push_back(0.5 * (mesh.vertices()[e[0]] + mesh.vertices()[e[1]]));

  // Children follow monotone paths (i, j) -> (i+1, j) | (i, j+1) with i <= j,
  // from (0, j0) to (j0, 4); vertex (i, j) is the midpoint of x_i and x_j.
  struct Path {
    std::array<std::array<int, 2>, 5> nodes;
  };
  static const std::vector<Path> paths = [] {
    std::vector<Path> out;
    Path cur{};
    auto rec = [&](auto&& self, int step, int i, int j, int j0) -> void {
      cur.nodes[static_cast<std::size_t>(step)] = {i, j};
      if (step == 4) {
        if (i == j0 && j == 4) out.push_back(cur);
        return;
      }
      if (i + 1 <= j && i + 1 <= j0) self(self, step + 1, i + 1, j, j0);
      if (j + 1 <= 4) self(self, step + 1, i, j + 1, j0);
    };
    for (int j0 = 0; j0 <= 4; ++j0) rec(rec, 0, 0, j0, j0);
    return out;
  }();

  std::vector<Pentatope> children;
  children.reserve(mesh.element_count() * paths.size());
  const auto& order = mesh.refinement_order();
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto& x = order[e];
    // Global edge id of (x_i, x_j): find the local edge of the ascending element.
    const auto& sorted = mesh.elements()[e];
    auto local_pos = [&](Index v) {
      return static_cast<int>(std::find(sorted.begin(), sorted.end(), v) - sorted.begin());
    };
    const auto local_edges = local_subsimplices(1);
    auto midpoint = [&](int i, int j) -> Index {
      if (i == j) return x[static_cast<std::size_t>(i)];
      int a = local_pos(x[static_cast<std::size_t>(i)]);
      int b = local_pos(x[static_cast<std::size_t>(j)]);
      if (a > b) std::swap(a, b);
      for (std::size_t l = 0; l < local_edges.size(); ++l)
        if (local_edges[l][0] == a && local_edges[l][1] == b)
          return static_cast<Index>(nv + edges.id(e, static_cast<int>(l)));
      throw MeshError("bey_refine: edge lookup failed");
    };
    for (const auto& path : paths) {
      Pentatope c{};
      for (std::size_t s = 0; s < 5; ++s) c[s] = midpoint(path.nodes[s][0], path.nodes[s][1]);
      children.push_back(c);
    }
  }
  return Mesh4(std::move(vertices), std::move(children));
}

std::vector<Mesh4> refine_hierarchy(const Mesh4& coarse, int levels) {
  if (levels < 0) throw std::invalid_argument("refine_hierarchy: negative level count");
  std::vector<Mesh4> out;
  out.reserve(static_cast<std::size_t>(levels) + 1);
  out.push_back(coarse);
  for (int l = 0; l < levels; ++l) out.push_back(bey_refine(out.back()));
  return out;
}

double GeomCache::total_volume() const { return std::accumulate(volume.begin(), volume.end(), 0.0); }

double GeomCache::max_diameter() const {
  return diameter.empty() ? 0.0 : *std::max_element(diameter.begin(), diameter.end());
}

GeomCache geometry(const Mesh4& mesh) {
  GeomCache g;
  const std::size_t ne = mesh.element_count();
  g.volume.resize(ne);
  g.gradients.resize(ne);
  g.diameter.resize(ne);
  const auto& x = mesh.vertices();
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& p = mesh.elements()[e];
    Eigen::Matrix4d jac;
    double h = 0.0;
    for (int c = 0; c < 4; ++c) {
      const Vec4 d = x[p[static_cast<std::size_t>(c) + 1]] - x[p[0]];
      for (int r = 0; r < 4; ++r) jac(r, c) = d[static_cast<std::size_t>(r)];
    }
    for (std::size_t a = 0; a < 5; ++a)
      for (std::size_t b = a + 1; b < 5; ++b) h = std::max(h, norm(x[p[b]] - x[p[a]]));
    const double d = jac.determinant();
    if (std::abs(d) < 1e-14 * std::pow(h, 4)) {
      throw MeshError("geometry: degenerate element " + std::to_string(e));
    }
    const Eigen::Matrix4d inv = jac.inverse();
    Vec4 sum;
    for (std::size_t i = 0; i < 4; ++i) {
      Vec4 gi;
      for (std::size_t c = 0; c < 4; ++c) gi[c] = inv(static_cast<int>(i), static_cast<int>(c));
      g.gradients[e][i + 1] = gi;
      sum += gi;
    }
    g.gradients[e][0] = -sum;
    g.volume[e] = std::abs(d) / 24.0;
    g.diameter[e] = h;
  }
  return g;
}

void write_mesh(std::ostream& out, const Mesh4& mesh) {
  out << "mesh4 " << mesh.vertex_count() << ' ' << mesh.element_count() << '\n';
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v[0] << ' ' << v[1] << ' ' << v[2] << ' ' << v[3] << '\n';
  for (const auto& p : mesh.refinement_order()) out << p[0] << ' ' << p[1] << ' ' << p[2] << ' ' << p[3] << ' ' << p[4] << '\n';
}

Mesh4 read_mesh(std::istream& in) {
  std::string tag;
  std::size_t nv = 0, ne = 0;
  if (!(in >> tag >> nv >> ne) || tag != "mesh4") throw MeshError("read_mesh: bad header");
  std::vector<Vec4> vertices(nv);
  for (auto& v : vertices)
    if (!(in >> v[0] >> v[1] >> v[2] >> v[3])) throw MeshError("read_mesh: truncated coordinates");
  std::vector<Pentatope> elements(ne);
  for (auto& p : elements)
    if (!(in >> p[0] >> p[1] >> p[2] >> p[3] >> p[4])) throw MeshError("read_mesh: truncated elements");
  return Mesh4(std::move(vertices), std::move(elements));
}

}  // namespace hx4d
