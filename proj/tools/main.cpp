#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hx4d/discretization.hpp"
#include "hx4d/experiment.hpp"

namespace {

constexpr int kDeepLevel = 4;

struct LevelRange {
  int lo = 0;
  int hi = 3;
};

LevelRange parse_levels(const std::string& s) {
  LevelRange r;
  const auto dots = s.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
    } else {
      const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
      r.lo = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(s);
      r.hi = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(s);
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad level range '" + s + "' (expected N or A..B)");
  }
  if (r.lo < 0 || r.hi < r.lo) throw std::invalid_argument("bad level range '" + s + "'");
  return r;
}

// "sweep" gives the 13 decades; otherwise a comma separated list.
std::vector<double> parse_taus(const std::string& s) {
  if (s == "sweep") return hx4d::tau_decades();
  std::vector<double> taus;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double t = 0.0;
    try {
      t = std::stod(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("bad tau value '" + item + "'");
    taus.push_back(t);
  }
  if (taus.empty()) throw std::invalid_argument("empty tau list");
  return taus;
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<hx4d::Mesh4> hierarchy(unsigned m, int level) {
  return hx4d::refine_hierarchy(hx4d::kuhn_unit_tesseract(m), level);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"4D de Rham complex discretization and auxiliary space preconditioning"};
  app.require_subcommand(1);

  auto* bench = app.add_subcommand("bench", "Convergence tables and tau sweeps with manufactured solutions");
  std::string space = "grad", levels = "0..3", tau = "1", precond = "hx", out = "-", format = "csv";
  double tol = 1e-6;
  int quad_degree = 5, max_iterations = 500;
  bool allow_deep = false, diagnostics = false;
  bench->add_option("--space", space, "grad, curl, div4 or div")
      ->check(CLI::IsMember({"grad", "curl", "div4", "div"}))
      ->capture_default_str();
  bench->add_option("--levels", levels, "Level N or range A..B")->capture_default_str();
  bench->add_option("--tau", tau, "Comma separated list, or 'sweep' for 1e-6..1e6")->capture_default_str();
  bench->add_option("--tol", tol, "Relative residual tolerance")->capture_default_str();
  bench->add_option("--precond", precond, "hx, variant-c or none")
      ->check(CLI::IsMember({"hx", "variant-c", "none"}))
      ->capture_default_str();
  bench->add_option("--out", out, "Output path, '-' for stdout")->capture_default_str();
  bench->add_option("--format", format, "csv or text")->check(CLI::IsMember({"csv", "text"}))->capture_default_str();
  bench->add_option("--quad-degree", quad_degree, "Quadrature degree for loads and errors")->capture_default_str();
  bench->add_option("--max-iterations", max_iterations, "PCG iteration cap")->capture_default_str();
  bench->add_flag("--allow-deep", allow_deep, "Permit levels of 4 and above");
  bench->add_flag("--diagnostics", diagnostics, "Append solver and timing columns (CSV convergence tables)");
  bool quiet = false;
  bench->add_flag("--quiet,-q", quiet, "No progress lines on stderr");

  auto* mesh_cmd = app.add_subcommand("mesh", "Write the refined Kuhn mesh in text form");
  int mesh_level = 0;
  unsigned cubes = 1;
  std::string mesh_out = "-";
  mesh_cmd->add_option("--level", mesh_level, "Refinement level")->capture_default_str();
  mesh_cmd->add_option("--cubes", cubes, "Cubes per axis of the initial mesh")->capture_default_str();
  mesh_cmd->add_option("--out", mesh_out, "Output path, '-' for stdout")->capture_default_str();

  auto* export_cmd = app.add_subcommand("export", "Write a matrix in Matrix Market format");
  int export_level = 0, degree = 0;
  double export_tau = 1.0;
  std::string what = "system", export_out = "-";
  export_cmd->add_option("--what", what, "mass, stiffness, derivative, interpolant or system")
      ->check(CLI::IsMember({"mass", "stiffness", "derivative", "interpolant", "system"}))
      ->capture_default_str();
  export_cmd->add_option("--degree", degree, "Form degree")->capture_default_str();
  export_cmd->add_option("--level", export_level, "Refinement level")->capture_default_str();
  export_cmd->add_option("--tau", export_tau, "Weight for 'system'")->capture_default_str();
  export_cmd->add_option("--out", export_out, "Output path, '-' for stdout")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench) {
      const auto range = parse_levels(levels);
      if (range.hi >= kDeepLevel && !allow_deep) {
        std::cerr << "levels >= " << kDeepLevel << " need --allow-deep\n";
        return 1;
      }
      hx4d::ExperimentConfig cfg;
      cfg.space = hx4d::parse_space(space);
      cfg.level_min = range.lo;
      cfg.level_max = range.hi;
      cfg.taus = parse_taus(tau);
      cfg.tol = tol;
      cfg.quad_degree = quad_degree;
      cfg.precond = hx4d::parse_precond(precond);
      cfg.max_iterations = max_iterations;
      cfg.diagnostics = diagnostics;
      cfg.validate();

      std::ostream* log = quiet ? nullptr : &std::cerr;
      std::ostringstream text;
      bool ok = true;
      if (cfg.taus.size() == 1) {
        const auto rows = hx4d::run_convergence(cfg, log);
        for (const auto& r : rows) ok = ok && r.converged;
        if (format == "csv") {
          hx4d::write_csv(text, rows, diagnostics);
        } else {
          hx4d::write_text(text, rows);
        }
      } else {
        const auto sweep = hx4d::run_tau_sweep(cfg, log);
        ok = sweep.all_converged();
        if (format == "csv") {
          hx4d::write_sweep_csv(text, sweep);
        } else {
          hx4d::write_sweep_text(text, sweep);
        }
      }
      write_output(out, text.str());
      if (!ok) {
        std::cerr << "some solves did not converge\n";
        return 2;
      }
      return 0;
    }

    if (*mesh_cmd) {
      if (mesh_level < 0) throw std::invalid_argument("level must be non-negative");
      const auto meshes = hierarchy(cubes, mesh_level);
      std::ostringstream text;
      hx4d::write_mesh(text, meshes.back());
      write_output(mesh_out, text.str());
      return 0;
    }

    if (*export_cmd) {
      if (export_level < 0) throw std::invalid_argument("level must be non-negative");
      const hx4d::Discretization disc(hierarchy(1, export_level));
      std::ostringstream text;
      if (what == "mass") {
        hx4d::write_matrix_market(text, disc.mass(degree));
      } else if (what == "stiffness") {
        hx4d::write_matrix_market(text, disc.stiffness(degree));
      } else if (what == "derivative") {
        hx4d::write_matrix_market(text, disc.derivative(degree));
      } else if (what == "interpolant") {
        hx4d::write_matrix_market(text, disc.interpolant(degree));
      } else {
        hx4d::write_matrix_market(text, *disc.system(degree, export_tau));
      }
      write_output(export_out, text.str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
