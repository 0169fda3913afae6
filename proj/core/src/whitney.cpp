#include "hx4d/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace hx4d {

namespace {

constexpr int kMaxTerms = 4;

// A local Whitney function written as sum_m lambda_{vertex[m]} * coeff[m].
struct LocalBasisFunction {
  int terms = 0;
  std::array<int, kMaxTerms> vertex{};
  std::array<FormProxy, kMaxTerms> coeff{};
};

FormProxy one_form(const Vec4& g) { return {1, g}; }

// g_{j_1} ^ ... ^ g_{j_r}; for r = 0 the constant 0-form 1.
FormProxy gradient_wedge(const Gradients& g, std::span<const int> ids) {
  FormProxy out = FormProxy::scalar(0, 1.0);
  for (int id : ids) out = wedge(out, one_form(g[static_cast<std::size_t>(id)]));
  return out;
}

// lambda_{i_0 ... i_k} = sum_m (-1)^m lambda_{i_m} g_{i_0} ^ ... (omit i_m) ... ^ g_{i_k}
std::vector<LocalBasisFunction> local_basis(int k, const Gradients& g) {
  const auto faces = local_subsimplices(k);
  std::vector<LocalBasisFunction> out(faces.size());
  for (std::size_t l = 0; l < faces.size(); ++l) {
    auto& b = out[l];
    b.terms = k + 1;
    for (int m = 0; m <= k; ++m) {
      std::array<int, 4> rest{};
      int n = 0;
      for (int q = 0; q <= k; ++q)
        if (q != m) rest[static_cast<std::size_t>(n++)] = faces[l][static_cast<std::size_t>(q)];
      FormProxy c = gradient_wedge(g, std::span<const int>(rest.data(), static_cast<std::size_t>(n)));
      if (m % 2 == 1) c *= -1.0;
      b.vertex[static_cast<std::size_t>(m)] = faces[l][static_cast<std::size_t>(m)];
      b.coeff[static_cast<std::size_t>(m)] = std::move(c);
    }
  }
  return out;
}

FormProxy eval_local(const LocalBasisFunction& b, const Barycentric& lambda) {
  FormProxy v = lambda[static_cast<std::size_t>(b.vertex[0])] * b.coeff[0];
  for (int m = 1; m < b.terms; ++m)
    v += lambda[static_cast<std::size_t>(b.vertex[static_cast<std::size_t>(m)])] * b.coeff[static_cast<std::size_t>(m)];
  return v;
}

FormProxy derivative_local(const LocalBasisFunction& b, const Gradients& g) {
  FormProxy v = wedge(one_form(g[static_cast<std::size_t>(b.vertex[0])]), b.coeff[0]);
  for (int m = 1; m < b.terms; ++m)
    v += wedge(one_form(g[static_cast<std::size_t>(b.vertex[static_cast<std::size_t>(m)])]),
               b.coeff[static_cast<std::size_t>(m)]);
  return v;
}

void check_barycentric(const Barycentric& lambda) {
  double s = 0.0;
  for (double l : lambda) {
    if (!(l >= -1e-12)) throw std::invalid_argument("whitney_eval: negative barycentric coordinate");
    s += l;
  }
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("whitney_eval: barycentric coordinates must sum to 1");
}

Vec4 physical_point(const Mesh4& mesh, std::size_t e, const Barycentric& lambda) {
  Vec4 x;
  const auto& p = mesh.elements()[e];
  for (std::size_t i = 0; i < 5; ++i) x += lambda[i] * mesh.vertices()[p[i]];
  return x;
}

}  // namespace

std::vector<FormProxy> whitney_eval(int k, const Gradients& g, const Barycentric& lambda) {
  if (k < 0 || k > 3) throw std::invalid_argument("whitney_eval: degree outside [0, 3]");
  check_barycentric(lambda);
  const auto basis = local_basis(k, g);
  std::vector<FormProxy> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(eval_local(b, lambda));
  return out;
}

std::vector<FormProxy> whitney_derivative(int k, const Gradients& g) {
  if (k < 0 || k > 3) throw std::invalid_argument("whitney_derivative: degree outside [0, 3]");
  const auto basis = local_basis(k, g);
  std::vector<FormProxy> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(derivative_local(b, g));
  return out;
}

double simplex_moment(const FormProxy& c, std::span<const Vec4> corners) {
  const int k = c.degree();
  if (static_cast<int>(corners.size()) != k + 1) {
    throw std::invalid_argument("simplex_moment: expected " + std::to_string(k + 1) + " corners");
  }
  std::array<Vec4, 4> edges{};
  for (int i = 0; i < k; ++i) edges[static_cast<std::size_t>(i)] = corners[static_cast<std::size_t>(i) + 1] - corners[0];
  return form_eval(c, std::span<const Vec4>(edges.data(), static_cast<std::size_t>(k)));
}

WhitneySpace::WhitneySpace(const Mesh4& mesh, const GeomCache& geom, int degree)
    : mesh_(&mesh), geom_(&geom), degree_(degree) {
  if (degree < 0 || degree > 3) throw std::invalid_argument("WhitneySpace: degree outside [0, 3]");
  if (geom.volume.size() != mesh.element_count()) throw std::invalid_argument("WhitneySpace: geometry/mesh mismatch");
}

Index WhitneySpace::dof(std::size_t e, int local) const {
  if (degree_ == 0) return mesh_->elements()[e][static_cast<std::size_t>(local)];
  return mesh_->subsimplices(degree_).id(e, local);
}

int WhitneySpace::sign(std::size_t e, int local) const {
  if (degree_ == 0) return 1;
  return mesh_->subsimplices(degree_).sign(e, local);
}

std::array<Index, 5> WhitneySpace::subsimplex(std::size_t dof) const {
  std::array<Index, 5> out{};
  if (degree_ == 0) {
    out[0] = static_cast<Index>(dof);
    return out;
  }
  const auto& v = mesh_->subsimplices(degree_).vertices[dof];
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

Vec4 WhitneySpace::point(std::size_t e, const Barycentric& lambda) const { return physical_point(*mesh_, e, lambda); }

FormProxy WhitneySpace::evaluate(std::span<const double> coeffs, std::size_t e, const Barycentric& lambda) const {
  if (coeffs.size() != size()) throw std::invalid_argument("WhitneySpace::evaluate: coefficient length mismatch");
  const auto basis = local_basis(degree_, geom_->gradients[e]);
  FormProxy v = FormProxy::zero(degree_);
  for (int l = 0; l < static_cast<int>(basis.size()); ++l)
    v += (sign(e, l) * coeffs[dof(e, l)]) * eval_local(basis[static_cast<std::size_t>(l)], lambda);
  return v;
}

SparseMatrix assemble_mass(const WhitneySpace& space, const QuadratureRule& quad) {
  if (quad.degree < 2) throw std::invalid_argument("assemble_mass: quadrature must be exact for degree 2");
  const int k = space.degree();
  const int nloc = local_subsimplex_count(k);
  const auto& geom = space.geometry();
  const std::size_t ne = space.mesh().element_count();
  TripletBuilder b(space.size(), space.size());
  b.reserve(ne * static_cast<std::size_t>(nloc * nloc));
  std::vector<FormProxy> values(quad.size() * static_cast<std::size_t>(nloc));
  std::vector<double> local(static_cast<std::size_t>(nloc * nloc));
  for (std::size_t e = 0; e < ne; ++e) {
    const auto basis = local_basis(k, geom.gradients[e]);
    for (std::size_t q = 0; q < quad.size(); ++q)
      for (int l = 0; l < nloc; ++l)
        values[q * static_cast<std::size_t>(nloc) + static_cast<std::size_t>(l)] =
            eval_local(basis[static_cast<std::size_t>(l)], quad.points[q]);
    const double jac = 24.0 * geom.volume[e];
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double w = quad.weights[q] * jac;
      const FormProxy* vq = &values[q * static_cast<std::size_t>(nloc)];
      for (int i = 0; i < nloc; ++i)
        for (int j = i; j < nloc; ++j) local[static_cast<std::size_t>(i * nloc + j)] += w * inner(vq[i], vq[j]);
    }
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) {
        const double v = i <= j ? local[static_cast<std::size_t>(i * nloc + j)] : local[static_cast<std::size_t>(j * nloc + i)];
        b.add(space.dof(e, i), space.dof(e, j), space.sign(e, i) * space.sign(e, j) * v);
      }
    }
  }
  return b.finalize();
}

SparseMatrix assemble_stiffness(const WhitneySpace& space) {
  const int k = space.degree();
  const int nloc = local_subsimplex_count(k);
  const auto& geom = space.geometry();
  const std::size_t ne = space.mesh().element_count();
  TripletBuilder b(space.size(), space.size());
  b.reserve(ne * static_cast<std::size_t>(nloc * nloc));
  for (std::size_t e = 0; e < ne; ++e) {
    const auto d = whitney_derivative(k, geom.gradients[e]);
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) {
        // inner() is symmetric bitwise, so the assembled matrix is exactly symmetric.
        const double v = geom.volume[e] * inner(d[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(j)]);
        b.add(space.dof(e, i), space.dof(e, j), space.sign(e, i) * space.sign(e, j) * v);
      }
    }
  }
  return b.finalize();
}

SparseMatrix derivative_matrix(const Mesh4& mesh, const GeomCache& geom, int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("derivative_matrix: k outside [0, 2]");
  const WhitneySpace from(mesh, geom, k);
  const WhitneySpace to(mesh, geom, k + 1);
  const auto src_faces = local_subsimplices(k);
  const auto dst_faces = local_subsimplices(k + 1);

  struct Entry {
    Index row, col;
    double value;
    std::size_t element;
  };
  std::vector<Entry> entries;
  entries.reserve(mesh.element_count() * dst_faces.size() * static_cast<std::size_t>(k + 2));
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto d = whitney_derivative(k, geom.gradients[e]);
    const auto& p = mesh.elements()[e];
    for (std::size_t lg = 0; lg < dst_faces.size(); ++lg) {
      std::array<Vec4, 5> corners{};
      for (int v = 0; v <= k + 1; ++v)
        corners[static_cast<std::size_t>(v)] = mesh.vertices()[p[static_cast<std::size_t>(dst_faces[lg][static_cast<std::size_t>(v)])]];
      const std::span<const Vec4> cs(corners.data(), static_cast<std::size_t>(k + 2));
      for (std::size_t lf = 0; lf < src_faces.size(); ++lf) {
        // Only subfaces of the target face contribute.
        const bool contained = std::all_of(src_faces[lf].begin(), src_faces[lf].begin() + k + 1, [&](int v) {
          return std::find(dst_faces[lg].begin(), dst_faces[lg].begin() + k + 2, v) != dst_faces[lg].begin() + k + 2;
        });
        if (!contained) continue;
        const double v = to.sign(e, static_cast<int>(lg)) * from.sign(e, static_cast<int>(lf)) * simplex_moment(d[lf], cs);
        entries.push_back({to.dof(e, static_cast<int>(lg)), from.dof(e, static_cast<int>(lf)), v, e});
      }
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
  TripletBuilder b(to.size(), from.size());
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    const double first = entries[i].value;
    for (; j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col; ++j) {
      if (std::abs(entries[j].value - first) > 1e-10) {
        throw AssemblyError("derivative_matrix: elements " + std::to_string(entries[i].element) + " and " +
                            std::to_string(entries[j].element) + " disagree on entry (" +
                            std::to_string(entries[i].row) + ", " + std::to_string(entries[i].col) + ")");
      }
    }
    const double rounded = std::round(first);
    if (std::abs(rounded - first) > 1e-10) {
      throw AssemblyError("derivative_matrix: non-integer entry " + std::to_string(first));
    }
    if (rounded != 0.0) b.add(entries[i].row, entries[i].col, rounded);
    i = j;
  }
  return b.finalize();
}

Vector assemble_load(const WhitneySpace& space, const QuadratureRule& quad, const Field& u, const Field& du,
                     double tau) {
  const int k = space.degree();
  const int nloc = local_subsimplex_count(k);
  const auto& geom = space.geometry();
  Vector f(space.size(), 0.0);
  for (std::size_t e = 0; e < space.mesh().element_count(); ++e) {
    const auto basis = local_basis(k, geom.gradients[e]);
    const auto d = whitney_derivative(k, geom.gradients[e]);
    const double jac = 24.0 * geom.volume[e];
    std::array<double, 10> local{};
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Vec4 x = space.point(e, quad.points[q]);
      const FormProxy uq = u(x);
      const FormProxy duq = du(x);
      const double w = quad.weights[q] * jac;
      for (int l = 0; l < nloc; ++l) {
        const auto ls = static_cast<std::size_t>(l);
        local[ls] += w * (tau * inner(uq, eval_local(basis[ls], quad.points[q])) + inner(duq, d[ls]));
      }
    }
    for (int l = 0; l < nloc; ++l) f[space.dof(e, l)] += space.sign(e, l) * local[static_cast<std::size_t>(l)];
  }
  return f;
}

double l2_error(const WhitneySpace& space, std::span<const double> coeffs, const Field& u,
                const QuadratureRule& quad) {
  if (coeffs.size() != space.size()) throw std::invalid_argument("l2_error: coefficient length mismatch");
  const int k = space.degree();
  const int nloc = local_subsimplex_count(k);
  const auto& geom = space.geometry();
  double sum = 0.0;
  for (std::size_t e = 0; e < space.mesh().element_count(); ++e) {
    const auto basis = local_basis(k, geom.gradients[e]);
    const double jac = 24.0 * geom.volume[e];
    for (std::size_t q = 0; q < quad.size(); ++q) {
      FormProxy diff = -1.0 * u(space.point(e, quad.points[q]));
      for (int l = 0; l < nloc; ++l)
        diff += (space.sign(e, l) * coeffs[space.dof(e, l)]) * eval_local(basis[static_cast<std::size_t>(l)], quad.points[q]);
      sum += quad.weights[q] * jac * inner(diff, diff);
    }
  }
  return std::sqrt(std::max(sum, 0.0));
}

}  // namespace hx4d
