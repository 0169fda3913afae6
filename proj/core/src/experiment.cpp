#include "hx4d/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "hx4d/quadrature.hpp"

namespace hx4d {

namespace {

// coeff * prod_i (sine[i] ? sin(pi x_i) : cos(pi x_i))
struct TrigTerm {
  double coeff;
  std::array<bool, 4> sine;

  double operator()(const Vec4& x) const {
    double v = coeff;
    for (int i = 0; i < 4; ++i) {
      const double t = std::numbers::pi * x[i];
      v *= sine[i] ? std::sin(t) : std::cos(t);
    }
    return v;
  }

  TrigTerm partial(int i) const {
    TrigTerm d = *this;
    d.coeff *= std::numbers::pi * (sine[i] ? 1.0 : -1.0);
    d.sine[i] = !sine[i];
    return d;
  }
};

using TrigSum = std::vector<TrigTerm>;

double eval(const TrigSum& s, const Vec4& x) {
  double v = 0.0;
  for (const auto& t : s) v += t(x);
  return v;
}

TrigSum partial(const TrigSum& s, int i, double scale = 1.0) {
  TrigSum out;
  for (const auto& t : s) {
    auto d = t.partial(i);
    d.coeff *= scale;
    out.push_back(d);
  }
  return out;
}

void append(TrigSum& dst, const TrigSum& src) { dst.insert(dst.end(), src.begin(), src.end()); }

TrigTerm term(double c, const char* pattern) {
  TrigTerm t{c, {}};
  for (int i = 0; i < 4; ++i) t.sine[i] = pattern[i] == 's';
  return t;
}

// Component lists in the proxy ordering of FormProxy::from_components.
std::vector<TrigSum> solution_components(int k) {
  switch (k) {
    case 0:
      return {{term(1, "cccc")}};
    case 1:
      return {{term(1, "sccc")}, {term(-1, "cscc")}, {term(1, "ccsc")}, {term(-1, "cccs")}};
    case 2:
      return {{term(1, "ccss")}, {term(-1, "cscs")}, {term(1, "cssc")},
              {term(1, "sccs")}, {term(-1, "scsc")}, {term(1, "sscc")}};
    default:
      return {{term(1, "csss")}, {term(1, "scss")}, {term(1, "sscs")}, {term(1, "sssc")}};
  }
}

std::vector<TrigSum> derivative_components(int k, const std::vector<TrigSum>& u) {
  std::vector<TrigSum> du;
  if (k == 0) {
    for (int i = 0; i < 4; ++i) du.push_back(partial(u[0], i));
  } else if (k == 1) {
    // [Curl w]_ij = sum_kl eps_ijkl d_k w_l
    for (const auto& [i, j] : Skew4::pairs) {
      TrigSum s;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const int e = levi_civita(i, j, a, b);
          if (e != 0) append(s, partial(u[static_cast<std::size_t>(b)], a, e));
        }
      du.push_back(std::move(s));
    }
  } else if (k == 2) {
    // [Div q]_i = sum_j d_j q_ij
    for (int i = 0; i < 4; ++i) {
      TrigSum s;
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        const double sign = i < j ? 1.0 : -1.0;
        append(s, partial(u[static_cast<std::size_t>(Skew4::pair_index(std::min(i, j), std::max(i, j)))], j, sign));
      }
      du.push_back(std::move(s));
    }
  } else {
    TrigSum s;
    for (int i = 0; i < 4; ++i) append(s, partial(u[static_cast<std::size_t>(i)], i));
    du.push_back(std::move(s));
  }
  return du;
}

Field make_field(int degree, std::vector<TrigSum> comps) {
  return [degree, comps = std::move(comps)](const Vec4& x) {
    std::vector<double> v(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) v[c] = eval(comps[c], x);
    return from_components(degree, v);
  };
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string tau_label(double tau) { return fmt("%g", tau); }

void write_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> width;
  for (const auto& row : cells) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      line += std::string(width[c] - row[c].size(), ' ') + row[c];
    }
    out << line << '\n';
  }
}

std::vector<Mesh4> prefix(const std::vector<Mesh4>& meshes, int level) {
  return {meshes.begin(), meshes.begin() + level + 1};
}

}  // namespace

std::string to_string(Space s) {
  switch (s) {
    case Space::grad: return "grad";
    case Space::curl: return "curl";
    case Space::div4: return "div4";
    case Space::div: return "div";
  }
  return "?";
}

std::string to_string(PrecondKind p) {
  switch (p) {
    case PrecondKind::hx: return "hx";
    case PrecondKind::variant_c: return "variant-c";
    case PrecondKind::none: return "none";
  }
  return "?";
}

Space parse_space(const std::string& name) {
  for (auto s : {Space::grad, Space::curl, Space::div4, Space::div})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown space '" + name + "'");
}

PrecondKind parse_precond(const std::string& name) {
  for (auto p : {PrecondKind::hx, PrecondKind::variant_c, PrecondKind::none})
    if (to_string(p) == name) return p;
  throw std::invalid_argument("unknown preconditioner '" + name + "'");
}

ManufacturedSolution manufactured_solution(Space space) {
  const int k = form_degree(space);
  auto u = solution_components(k);
  auto du = derivative_components(k, u);
  return {make_field(k, std::move(u)), make_field(k + 1, std::move(du))};
}

std::vector<double> tau_decades() {
  std::vector<double> t;
  for (int e = -6; e <= 6; ++e) t.push_back(std::pow(10.0, e));
  return t;
}

void ExperimentConfig::validate() const {
  if (level_min < 0 || level_max < level_min) throw std::invalid_argument("invalid level range");
  if (taus.empty()) throw std::invalid_argument("empty tau list");
  for (double t : taus)
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("tau must be positive and finite");
  if (!(tol > 0.0) || tol >= 1.0) throw std::invalid_argument("tol must lie in (0, 1)");
  if (quad_degree < 1 || quad_degree > 7) throw std::invalid_argument("quadrature degree must lie in 1..7");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
}

LevelSolve solve_level(const Discretization& disc, Space space, double tau, PrecondKind precond, double tol,
                       int quad_degree, int max_iterations) {
  const int k = form_degree(space);
  const auto sol = manufactured_solution(space);
  const auto quad = gm_quadrature(quad_degree);
  const Vector rhs = assemble_load(disc.space(k), quad, sol.u, sol.du, tau);

  LevelSolve out;
  const PcgOptions opts{tol, max_iterations};
  if (k == 0) {
    const auto a = disc.system(0, tau);
    const auto h = disc.scalar_hierarchy(tau);
    const auto b = precond == PrecondKind::none ? LinearOperator::identity(a->rows()) : multigrid_operator(*h);
    auto res = pcg(LinearOperator::from_matrix(*a), b, rhs, opts);
    out.x = std::move(res.x);
    out.report = std::move(res.report);
    return out;
  }
  const HxPreconditioner hx(disc, k, tau, disc.scalar_hierarchy(tau));
  LinearOperator b;
  switch (precond) {
    case PrecondKind::hx: b = hx.as_operator(&out.diag); break;
    case PrecondKind::variant_c: b = hx.variant_c_operator(&out.diag); break;
    case PrecondKind::none: b = LinearOperator::identity(hx.size()); break;
  }
  auto res = pcg(hx.system_operator(), b, rhs, opts);
  out.x = std::move(res.x);
  out.report = std::move(res.report);
  return out;
}

std::vector<TableRow> run_convergence(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  const int k = form_degree(cfg.space);
  const double tau = cfg.taus.front();
  const auto meshes = refine_hierarchy(kuhn_unit_tesseract(1), cfg.level_max);
  const auto sol = manufactured_solution(cfg.space);
  const auto quad = gm_quadrature(cfg.quad_degree);

  std::vector<TableRow> rows;
  for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
    const Discretization disc(prefix(meshes, level));
    TableRow row;
    row.level = level;
    row.elements = disc.mesh().element_count();
    row.dofs = disc.dofs(k);
    try {
      const auto s = solve_level(disc, cfg.space, tau, cfg.precond, cfg.tol, cfg.quad_degree, cfg.max_iterations);
      row.iterations = s.report.iterations;
      row.converged = s.report.converged;
      row.relative_residual = s.report.relative_residual;
      row.kappa = s.report.iterations > 0 ? lanczos_extremes(s.report).kappa : 1.0;
      row.diag = s.diag;
      row.l2_error = l2_error(disc.space(k), s.x, sol.u, quad);
    } catch (const NumericError& e) {
      row.converged = false;
      row.l2_error = std::nan("");
      if (log) *log << "level " << level << ": " << e.what() << '\n';
    }
    if (!rows.empty() && rows.back().l2_error > 0.0 && row.l2_error > 0.0)
      row.eoc = std::log2(rows.back().l2_error / row.l2_error);
    if (log) {
      *log << to_string(cfg.space) << " level " << level << ": dof " << row.dofs << ", iters " << row.iterations
           << (row.converged ? "" : " (not converged)") << ", error " << fmt("%.6e", row.l2_error) << '\n';
    }
    rows.push_back(row);
  }
  return rows;
}

bool TauSweep::all_converged() const {
  for (const auto& r : converged)
    for (bool c : r)
      if (!c) return false;
  return true;
}

TauSweep run_tau_sweep(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  const auto meshes = refine_hierarchy(kuhn_unit_tesseract(1), cfg.level_max);
  TauSweep sweep;
  sweep.taus = cfg.taus;
  for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
    const Discretization disc(prefix(meshes, level));
    sweep.levels.push_back(level);
    auto& its = sweep.iterations.emplace_back();
    auto& ok = sweep.converged.emplace_back();
    for (double tau : cfg.taus) {
      int n = 0;
      bool c = false;
      try {
        const auto s = solve_level(disc, cfg.space, tau, cfg.precond, cfg.tol, cfg.quad_degree, cfg.max_iterations);
        n = s.report.iterations;
        c = s.report.converged;
      } catch (const NumericError& e) {
        if (log) *log << "level " << level << " tau " << tau_label(tau) << ": " << e.what() << '\n';
      }
      its.push_back(n);
      ok.push_back(c);
      if (log) {
        *log << to_string(cfg.space) << " level " << level << " tau " << tau_label(tau) << ": iters " << n
             << (c ? "" : " (not converged)") << '\n';
      }
    }
  }
  return sweep;
}

void write_csv(std::ostream& out, const std::vector<TableRow>& rows, bool diagnostics) {
  out << "level,elements,dof,l2_error,eoc,iters,kappa";
  if (diagnostics) out << ",converged,rel_residual,smoother_s,nodal_s,potential_s,inner_total,inner_max,inner_cap_hits";
  out << '\n';
  for (const auto& r : rows) {
    out << r.level << ',' << r.elements << ',' << r.dofs << ',' << fmt("%.6e", r.l2_error) << ','
        << (r.eoc ? fmt("%.4f", *r.eoc) : "") << ',' << r.iterations << ',' << fmt("%.4f", r.kappa);
    if (diagnostics) {
      out << ',' << (r.converged ? 1 : 0) << ',' << fmt("%.3e", r.relative_residual) << ','
          << fmt("%.4f", r.diag.smoother_seconds) << ',' << fmt("%.4f", r.diag.nodal_seconds) << ','
          << fmt("%.4f", r.diag.potential_seconds) << ',' << r.diag.inner_iterations_total << ','
          << r.diag.inner_iterations_max << ',' << r.diag.inner_cap_hits;
    }
    out << '\n';
  }
}

void write_text(std::ostream& out, const std::vector<TableRow>& rows) {
  std::vector<std::vector<std::string>> cells{{"level", "elements", "dof", "L2 error", "eoc", "iter", "kappa"}};
  for (const auto& r : rows) {
    cells.push_back({std::to_string(r.level), std::to_string(r.elements), std::to_string(r.dofs),
                     fmt("%.6e", r.l2_error), r.eoc ? fmt("%.2f", *r.eoc) : "-",
                     std::to_string(r.iterations) + (r.converged ? "" : "*"), fmt("%.2f", r.kappa)});
  }
  write_aligned(out, cells);
}

void write_sweep_csv(std::ostream& out, const TauSweep& sweep) {
  out << "level";
  for (double t : sweep.taus) out << ',' << tau_label(t);
  out << '\n';
  for (std::size_t l = 0; l < sweep.levels.size(); ++l) {
    out << sweep.levels[l];
    for (int n : sweep.iterations[l]) out << ',' << n;
    out << '\n';
  }
}

void write_sweep_text(std::ostream& out, const TauSweep& sweep) {
  std::vector<std::vector<std::string>> cells(1, {"level \\ tau"});
  for (double t : sweep.taus) cells[0].push_back(tau_label(t));
  for (std::size_t l = 0; l < sweep.levels.size(); ++l) {
    std::vector<std::string> row{std::to_string(sweep.levels[l])};
    for (std::size_t j = 0; j < sweep.taus.size(); ++j)
      row.push_back(std::to_string(sweep.iterations[l][j]) + (sweep.converged[l][j] ? "" : "*"));
    cells.push_back(std::move(row));
  }
  write_aligned(out, cells);
}

}  // namespace hx4d
