// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: hx4d_acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "affine.hpp"
#include "hx4d/auxiliary.hpp"
#include "hx4d/experiment.hpp"
#include "hx4d/interp.hpp"
#include "hx4d/whitney.hpp"
#include "oracles.hpp"

using namespace hx4d;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double v, const char* f = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Vector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

std::vector<Mesh4> levels(int max_level) { return refine_hierarchy(kuhn_unit_tesseract(1), max_level); }

const std::vector<Space> all_spaces{Space::grad, Space::curl, Space::div4, Space::div};

// 1. d o d = 0 with exactly zero entries.
void complex_property(Outcome& o) {
  const auto meshes = levels(2);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> small(-1000, 1000);
  for (std::size_t l = 0; l < meshes.size(); ++l) {
    const auto g = geometry(meshes[l]);
    std::vector<SparseMatrix> d;
    for (int k = 0; k <= 2; ++k) d.push_back(derivative_matrix(meshes[l], g, k));
    for (int k = 0; k <= 1; ++k) {
      const auto p = SparseMatrix::multiply(d[static_cast<std::size_t>(k + 1)], d[static_cast<std::size_t>(k)]);
      bool zero = std::all_of(p.values().begin(), p.values().end(), [](double v) { return v == 0.0; });
      // Integer inputs keep every intermediate exact, so products apply to zero.
      for (int t = 0; t < 5; ++t) {
        Vector x(d[static_cast<std::size_t>(k)].cols());
        for (auto& v : x) v = small(rng);
        const Vector y = d[static_cast<std::size_t>(k + 1)] * (d[static_cast<std::size_t>(k)] * x);
        zero = zero && std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; });
      }
      o.require(zero, "D" + std::to_string(k + 1) + "D" + std::to_string(k) + " at level " + std::to_string(l));
    }
  }
  o.detail << "levels 0-2, D1 D0 and D2 D1 have no nonzero entries";
}

// 2. Proxy algebra and analytic derivative identities.
void proxy_identities(Outcome& o) {
  std::mt19937_64 rng(2024);
  const int n = 1000;
  double worst = 0.0;
  auto track = [&](double err, double scale) { worst = std::max(worst, err / std::max(1.0, scale)); };

  // Wedge products against the multi-index algebra, for every degree pair.
  for (int k = 0; k <= 4; ++k)
    for (int l = 0; k + l <= 4; ++l)
      for (int t = 0; t < n; ++t) {
        const auto a = oracle::random_form(k, rng), b = oracle::random_form(l, rng);
        const auto w = wedge(oracle::to_proxy(a), oracle::to_proxy(b));
        const auto ref = oracle::to_proxy(oracle::wedge(a, b));
        track(oracle::max_abs_diff(w, ref), oracle::max_abs(ref));
        const auto ba = wedge(oracle::to_proxy(b), oracle::to_proxy(a));
        track(oracle::max_abs_diff(w, ((k * l) % 2 == 0 ? 1.0 : -1.0) * ba), oracle::max_abs(w));
      }

  // Values of forms on vectors against the determinant expansion.
  for (int k = 1; k <= 4; ++k)
    for (int t = 0; t < n; ++t) {
      const auto f = oracle::random_form(k, rng);
      std::vector<Vec4> vs;
      for (int i = 0; i < k; ++i) vs.push_back(oracle::random_vec(rng));
      const double ref = oracle::evaluate(f, vs);
      track(std::abs(form_eval(oracle::to_proxy(f), vs) - ref), std::abs(ref));
    }

  // d of a polynomial form against grad, Curl, Div, div of its proxy, and d o d = 0.
  for (int k = 0; k <= 3; ++k)
    for (int t = 0; t < n; ++t) {
      oracle::Form<oracle::Poly> f{k, {}};
      for (std::size_t i = 0; i < oracle::multi_indices(k).size(); ++i) f.c.push_back(oracle::random_poly(rng));
      const auto proxy = oracle::proxy_components(f);
      const auto lhs = oracle::proxy_components(oracle::exterior_derivative(f));
      const auto rhs = oracle::proxy_derivative<oracle::Poly>(
          k, [&](int c, int i) { return proxy[static_cast<std::size_t>(c)].partial(i); });
      const Vec4 x = oracle::random_vec(rng);
      for (std::size_t c = 0; c < lhs.size(); ++c) track(std::abs(lhs[c](x) - rhs[c](x)), std::abs(lhs[c](x)));
      if (k <= 2) {
        const auto dd = oracle::proxy_derivative<oracle::Poly>(
            k + 1, [&](int c, int i) { return rhs[static_cast<std::size_t>(c)].partial(i); });
        for (const auto& q : dd) track(std::abs(q(x)), 1.0);
      }
    }

  // K relates the antisymmetrized gradient to Curl, and curl w = Div K w.
  for (int t = 0; t < n; ++t) {
    std::vector<oracle::Poly> u, w;
    for (int c = 0; c < 4; ++c) u.push_back(oracle::random_poly(rng));
    for (int c = 0; c < 6; ++c) w.push_back(oracle::random_poly(rng));
    const Vec4 x = oracle::random_vec(rng);
    Mat4 skw_t;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        skw_t(i, j) = 0.5 * (u[j].partial(static_cast<int>(i))(x) - u[i].partial(static_cast<int>(j))(x));
    const auto curl = oracle::proxy_derivative<oracle::Poly>(1, [&](int c, int i) { return u[static_cast<std::size_t>(c)].partial(i); });
    const Skew4 kg = k_map(skw_t);
    for (std::size_t p = 0; p < 6; ++p) track(std::abs(kg.upper[p] - curl[p](x)), std::abs(curl[p](x)));

    Mat4 wm;
    for (const auto& [i, j] : Skew4::pairs) {
      wm(i, j) = w[Skew4::pair_index(i, j)](x);
      wm(j, i) = -wm(i, j);
    }
    std::vector<oracle::Poly> kw;
    for (const auto& [i, j] : Skew4::pairs) {
      oracle::Poly s;
      for (const auto& [k, l] : Skew4::pairs)
        s = s + 2.0 * static_cast<double>(oracle::eps(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k), static_cast<int>(l))) * w[Skew4::pair_index(k, l)];
      kw.push_back(s);
    }
    // The library K map agrees with the polynomial K at the sample point.
    const Skew4 kwx = k_map(wm);
    for (std::size_t p = 0; p < 6; ++p) track(std::abs(kwx.upper[p] - kw[p](x)), std::abs(kw[p](x)));
    const auto div_kw = oracle::proxy_derivative<oracle::Poly>(2, [&](int c, int i) { return kw[static_cast<std::size_t>(c)].partial(i); });
    for (int i = 0; i < 4; ++i) {
      double s = 0.0;
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            if (k == l) continue;
            const double sign = k < l ? 1.0 : -1.0;
            s += oracle::eps(i, j, k, l) * sign *
                 w[Skew4::pair_index(static_cast<std::size_t>(std::min(k, l)), static_cast<std::size_t>(std::max(k, l)))].partial(j)(x);
          }
      track(std::abs(s - div_kw[static_cast<std::size_t>(i)](x)), std::abs(s));
    }
  }

  // K o K = 4 id on integer skews, compared exactly.
  std::uniform_int_distribution<int> small(-9, 9);
  bool kk_exact = true;
  for (int t = 0; t < n; ++t) {
    Skew4 z;
    for (auto& v : z.upper) v = small(rng);
    kk_exact = kk_exact && k_map(k_map(z.to_matrix()).to_matrix()) == 4.0 * z;
  }
  o.require(worst <= 1e-12, "max relative deviation " + fmt(worst));
  o.require(kk_exact, "K o K = 4 id");
  o.detail << n << " instances per identity, max relative deviation " << fmt(worst) << ", K o K exact";
}

// 3. Commuting interpolants on random affine fields.
void commuting(Outcome& o) {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (const auto& m : levels(1)) {
    const auto g = geometry(m);
    for (int k = 0; k <= 2; ++k) {
      const auto d = derivative_matrix(m, g, k);
      const auto pk = interpolant_matrix(m, k), pk1 = interpolant_matrix(m, k + 1);
      for (int t = 0; t < 50; ++t) {
        const auto u = oracle::random_affine(k, rng);
        const FormProxy du = u.derivative();
        const auto lhs = d * pi_apply(pk, oracle::nodal(m, [&](const Vec4& x) { return u(x); }, k));
        const auto rhs = pi_apply(pk1, oracle::nodal(m, [&](const Vec4&) { return du; }, k + 1));
        for (std::size_t i = 0; i < lhs.size(); ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
      }
    }
  }
  o.require(worst <= 1e-12, "max deviation " + fmt(worst));
  o.detail << "50 fields per degree on levels 0-1, max deviation " << fmt(worst);
}

// Rows of the tau = 1 convergence runs, shared by criteria 4 and 5.
std::vector<std::vector<TableRow>>& convergence_rows() {
  static std::vector<std::vector<TableRow>> rows = [] {
    std::vector<std::vector<TableRow>> out;
    for (auto s : all_spaces) {
      ExperimentConfig cfg;
      cfg.space = s;
      cfg.level_max = 3;
      out.push_back(run_convergence(cfg));
    }
    return out;
  }();
  return rows;
}

// 4. Convergence rates at level 3.
void rates(Outcome& o) {
  const double bound[4] = {1.4, 0.7, 0.75, 0.9};
  const auto& rows = convergence_rows();
  for (std::size_t s = 0; s < all_spaces.size(); ++s) {
    const auto& last = rows[s].back();
    const double eoc = last.eoc.value_or(std::nan(""));
    o.detail << to_string(all_spaces[s]) << " " << fmt(eoc, "%.3f") << " (>= " << bound[s] << ")  ";
    o.require(last.level == 3 && eoc >= bound[s], to_string(all_spaces[s]));
  }
}

// 5. Iteration bounds at tau = 1.
void iteration_bounds(Outcome& o) {
  const auto& rows = convergence_rows();
  for (std::size_t s = 0; s < all_spaces.size(); ++s) {
    const int limit = s == 0 ? 30 : 40;
    int worst = 0;
    bool conv = true;
    for (const auto& r : rows[s]) {
      worst = std::max(worst, r.iterations);
      conv = conv && r.converged;
    }
    o.detail << to_string(all_spaces[s]) << " max " << worst << " (<= " << limit << ")  ";
    o.require(conv && worst <= limit, to_string(all_spaces[s]));
  }
}

// 6. Robustness in tau at level 2.
void tau_robustness(Outcome& o) {
  for (auto s : all_spaces) {
    ExperimentConfig cfg;
    cfg.space = s;
    cfg.level_min = cfg.level_max = 2;
    cfg.taus = tau_decades();
    const auto sweep = run_tau_sweep(cfg);
    const auto& its = sweep.iterations.front();
    const int hi = *std::max_element(its.begin(), its.end());
    const int lo = *std::min_element(its.begin(), its.end());
    o.detail << to_string(s) << " " << lo << ".." << hi << "  ";
    o.require(sweep.all_converged() && hi <= 45 && hi <= 3 * lo, to_string(s));
  }
}

// 7. Symmetry, positivity, and recursive versus expanded potential forms.
void preconditioner_algebra(Outcome& o) {
  const Discretization disc(levels(2));
  std::mt19937_64 rng(7);
  double worst_sym = 0.0, worst_form = 0.0;
  bool positive = true;
  for (double tau : {1e-6, 1.0, 1e6}) {
    const auto b0 = disc.scalar_hierarchy(tau);
    for (auto s : all_spaces) {
      const int k = form_degree(s);
      std::unique_ptr<HxPreconditioner> hx;
      LinearOperator b;
      if (k == 0) {
        b = multigrid_operator(*b0);
      } else {
        hx = std::make_unique<HxPreconditioner>(disc, k, tau, b0);
        b = hx->as_operator();
      }
      for (int t = 0; t < 1000; ++t) {
        const Vector v = random_vector(b.size(), rng), w = random_vector(b.size(), rng);
        const Vector bv = b(v), bw = b(w);
        worst_sym = std::max(worst_sym, std::abs(dot(bv, w) - dot(v, bw)) / (norm2(bv) * norm2(w)));
        positive = positive && dot(bv, v) > 0.0;
      }
    }
    const HxPreconditioner expanded(disc, 2, tau, b0, {SmootherKind::chebyshev, PotentialForm::expanded});
    const HxPreconditioner recursive(disc, 2, tau, b0, {SmootherKind::chebyshev, PotentialForm::recursive});
    for (int t = 0; t < 100; ++t) {
      const Vector v = random_vector(expanded.size(), rng);
      Vector a(v.size()), c(v.size());
      expanded.apply(v, a);
      recursive.apply(v, c);
      for (std::size_t i = 0; i < v.size(); ++i) c[i] -= a[i];
      worst_form = std::max(worst_form, norm2(c) / norm2(a));
    }
    o.detail << "tau " << fmt(tau, "%g") << ": forms " << fmt(worst_form) << "  ";
  }
  o.require(worst_sym <= 1e-10, "symmetry " + fmt(worst_sym));
  o.require(positive, "positivity");
  o.require(worst_form <= 1e-12, "recursive vs expanded " + fmt(worst_form));
  o.detail << "symmetry " << fmt(worst_sym) << ", positive " << (positive ? "yes" : "no");
}

// 8. Condition numbers across levels 1-3.
void condition_stability(Outcome& o) {
  const auto meshes = levels(3);
  std::vector<std::unique_ptr<Discretization>> discs;
  for (int l = 1; l <= 3; ++l) discs.push_back(std::make_unique<Discretization>(std::vector<Mesh4>(meshes.begin(), meshes.begin() + l + 1)));
  for (double tau : {1e-3, 1.0, 1e3}) {
    for (auto s : all_spaces) {
      const int k = form_degree(s);
      std::vector<double> kappa;
      for (const auto& dp : discs) {
        const Discretization& disc = *dp;
        const auto b0 = disc.scalar_hierarchy(tau);
        if (k == 0) {
          const auto a = disc.system(0, tau);
          kappa.push_back(condition_estimate(LinearOperator::from_matrix(*a), multigrid_operator(*b0)).kappa);
        } else {
          const HxPreconditioner hx(disc, k, tau, b0);
          kappa.push_back(condition_estimate(hx.system_operator(), hx.as_operator()).kappa);
        }
      }
      const double lo = *std::min_element(kappa.begin(), kappa.end());
      const double hi = *std::max_element(kappa.begin(), kappa.end());
      o.require(hi <= 2.0 * lo, to_string(s) + " tau " + fmt(tau, "%g"));
      o.detail << "\n    tau " << fmt(tau, "%-6g") << " " << to_string(s) << ":";
      for (double kv : kappa) o.detail << " " << fmt(kv, "%.2f");
      o.detail << "  ratio " << fmt(hi / lo, "%.2f");
    }
  }
}

// 9. Two CLI runs give byte-identical CSV.
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void determinism(Outcome& o) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("hx4d_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const std::vector<std::string> commands{
      "bench --space curl --levels 0..2 --format csv --quiet",
      "bench --space div4 --levels 1 --tau sweep --format csv --quiet",
  };
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string out[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path file = dir / ("run" + std::to_string(c) + "_" + std::to_string(run) + ".csv");
      const std::string cmd = std::string("\"") + HX4D_CLI_PATH + "\" " + commands[c] + " --out \"" + file.string() + "\"";
      const int status = std::system(cmd.c_str());
      o.require(status == 0, "exit status of: " + commands[c]);
      out[run] = slurp(file);
    }
    o.require(!out[0].empty() && out[0] == out[1], "identical output of: " + commands[c]);
    o.detail << "'" << commands[c] << "' " << out[0].size() << " bytes  ";
  }
  fs::remove_all(dir);
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "complex property", 10, complex_property},
      {2, "proxy identities", 5, proxy_identities},
      {3, "commuting interpolants", 10, commuting},
      {4, "convergence rates", 1800, rates},
      {5, "iteration bounds", 1800, iteration_bounds},
      {6, "tau robustness", 1200, tau_robustness},
      {7, "preconditioner algebra", 1800, preconditioner_algebra},
      {8, "condition number stability", 1800, condition_stability},
      {9, "determinism", 600, determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= c.budget_seconds, "runtime over " + fmt(c.budget_seconds, "%g") + " s");
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " (" << fmt(secs, "%.1f") << " s): "
              << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
