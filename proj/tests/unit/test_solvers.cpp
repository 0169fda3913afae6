#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "hx4d/krylov.hpp"
#include "hx4d/multigrid.hpp"
#include "hx4d/smoother.hpp"
#include "hx4d/sparse.hpp"
#include "hx4d/whitney.hpp"

using namespace hx4d;

namespace {

SparseMatrix from_dense(const Eigen::MatrixXd& a) {
  TripletBuilder b(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) b.add(static_cast<std::size_t>(i), static_cast<std::size_t>(j), a(i, j));
  return b.finalize();
}

Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i, j) = g(rng);
  return q.transpose() * q + n * Eigen::MatrixXd::Identity(n, n);
}

Vector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

SparseMatrix diagonal(const std::vector<double>& d) {
  TripletBuilder b(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) b.add(i, i, d[i]);
  return b.finalize();
}

double t3(double x) { return 4 * x * x * x - 3 * x; }

}  // namespace

TEST_CASE("triplet assembly") {
  TripletBuilder b(3, 3);
  b.add(2, 1, 1.0);
  b.add(0, 0, 2.0);
  b.add(2, 1, 0.5);
  b.add(1, 2, 1.0);
  b.add(1, 2, -1.0);
  const auto m = b.finalize();
  CHECK(m.nnz() == 2);
  CHECK(m.at(2, 1) == 1.5);
  CHECK(m.at(0, 0) == 2.0);
  CHECK(m.at(1, 2) == 0.0);
  CHECK_THROWS_AS(b.add(3, 0, 1.0), std::out_of_range);
}

TEST_CASE("sparse products and transposes") {
  std::mt19937_64 rng(41);
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(7, 5), c = Eigen::MatrixXd::Random(5, 6);
  a(1, 2) = 0.0;
  const auto sa = from_dense(a), sc = from_dense(c);
  const auto prod = SparseMatrix::multiply(sa, sc);
  const Eigen::MatrixXd ref = a * c;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 6; ++j) CHECK(prod.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) == doctest::Approx(ref(i, j)));
  const auto t = sa.transpose();
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 5; ++j) CHECK(t.at(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) == a(i, j));
  const Vector x = random_vector(5, rng), y = random_vector(7, rng);
  Vector ax(7), aty(5);
  sa.apply(x, ax);
  sa.apply_transpose(y, aty);
  CHECK(dot(ax, y) == doctest::Approx(dot(x, aty)));
  CHECK_THROWS_AS(sa.apply(y, ax), std::invalid_argument);
  CHECK_THROWS_AS(SparseMatrix::add(1.0, sa, 1.0, sc), std::invalid_argument);
  const auto sum = SparseMatrix::add(2.0, sa, -2.0, sa);
  CHECK(sum.nnz() == 0);
}

TEST_CASE("Matrix Market round trip") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(6, 4);
  const auto m = from_dense(a);
  std::stringstream ss;
  write_matrix_market(ss, m);
  CHECK(ss.str().rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
  const auto back = read_matrix_market(ss);
  CHECK(back == m);
}

TEST_CASE("pcg trivial cases") {
  const auto id = SparseMatrix::identity(5);
  const auto a = LinearOperator::from_matrix(id);
  const auto r0 = pcg(a, LinearOperator::identity(5), Vector(5, 0.0));
  CHECK(r0.report.iterations == 0);
  CHECK(r0.report.converged);
  for (double v : r0.x) CHECK(v == 0.0);

  const Vector b{1, 2, 3, 4, 5};
  const auto r1 = pcg(a, LinearOperator::identity(5), b);
  CHECK(r1.report.iterations == 1);
  CHECK(r1.report.relative_residual <= 1e-15);
  CHECK_THROWS_AS(pcg(a, LinearOperator::identity(4), b), std::invalid_argument);
}

TEST_CASE("pcg with the exact inverse") {
  std::mt19937_64 rng(42);
  const Eigen::MatrixXd a = random_spd(50, rng);
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  const auto sa = from_dense(a);
  const LinearOperator inv(50, [&](std::span<const double> r, std::span<double> z) {
    Eigen::Map<Eigen::VectorXd>(z.data(), 50) = llt.solve(Eigen::Map<const Eigen::VectorXd>(r.data(), 50));
  });
  const Vector b = random_vector(50, rng);
  const auto res = pcg(LinearOperator::from_matrix(sa), inv, b, {1e-12, 500});
  CHECK(res.report.iterations == 1);
  CHECK(res.report.relative_residual <= 1e-12);

  const auto est = condition_estimate(LinearOperator::from_matrix(sa), inv);
  CHECK(est.kappa == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("cg converges within n steps and decreases the energy error") {
  std::mt19937_64 rng(43);
  for (int n : {5, 17, 40}) {
    const Eigen::MatrixXd a = random_spd(n, rng);
    const auto sa = from_dense(a);
    const Vector b = random_vector(static_cast<std::size_t>(n), rng);
    const auto res = pcg(LinearOperator::from_matrix(sa), LinearOperator::identity(static_cast<std::size_t>(n)), b, {1e-10, n});
    CHECK(res.report.converged);
    CHECK(res.report.iterations <= n);

    const Eigen::VectorXd xs = a.llt().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), n));
    double prev = 1e300;
    for (int it = 1; it <= res.report.iterations; ++it) {
      const auto r = pcg(LinearOperator::from_matrix(sa), LinearOperator::identity(static_cast<std::size_t>(n)), b, {1e-300, it});
      const Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(r.x.data(), n) - xs;
      const double energy = e.dot(a * e);
      CHECK(energy <= prev * (1 + 1e-12));
      prev = energy;
    }
  }
}

TEST_CASE("pcg failure modes") {
  const auto id = SparseMatrix::identity(3);
  const auto a = LinearOperator::from_matrix(id);
  const LinearOperator neg(3, [](std::span<const double> r, std::span<double> z) {
    for (std::size_t i = 0; i < r.size(); ++i) z[i] = -r[i];
  });
  CHECK_THROWS_AS(pcg(a, neg, Vector{1, 2, 3}), SpdViolation);
  CHECK_THROWS_AS(pcg(a, LinearOperator::identity(3), Vector{1, NAN, 3}), NumericError);

  const auto d = diagonal({1, 10, 100, 1000});
  const auto capped = pcg(LinearOperator::from_matrix(d), LinearOperator::identity(4), Vector{1, 1, 1, 1}, {1e-12, 2});
  CHECK_FALSE(capped.report.converged);
  CHECK(capped.report.iterations == 2);
}

TEST_CASE("condition estimate of a diagonal matrix") {
  std::vector<double> d;
  for (int i = 1; i <= 10; ++i) d.push_back(i);
  const auto m = diagonal(d);
  const auto est = condition_estimate(LinearOperator::from_matrix(m), LinearOperator::identity(10));
  CHECK(est.lambda_min == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(est.lambda_max == doctest::Approx(10.0).epsilon(1e-8));
  CHECK(est.kappa == doctest::Approx(10.0).epsilon(1e-8));
}

TEST_CASE("Chebyshev smoother") {
  std::vector<double> lam;
  for (int i = 0; i < 20; ++i) lam.push_back(0.05 + 0.1 * i);
  auto a = std::make_shared<const SparseMatrix>(diagonal(lam));
  const double lo = 0.2, hi = 2.2;
  const ChebySmoother s(a, std::vector<double>(lam.size(), 1.0), lo, hi, 3);
  Vector r(lam.size(), 1.0), x(lam.size());
  s.apply(r, x);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double p = (1.0 - t3((hi + lo - 2 * lam[i]) / (hi - lo)) / t3((hi + lo) / (hi - lo))) / lam[i];
    CHECK(x[i] == doctest::Approx(p).epsilon(1e-12));
  }

  Vector zero(lam.size(), 0.0), out(lam.size(), 1.0);
  s.apply(zero, out);
  for (double v : out) CHECK(v == 0.0);

  // Symmetry on a real operator with Jacobi scaling.
  const auto mesh = bey_refine(kuhn_unit_tesseract(1));
  auto op = std::make_shared<const SparseMatrix>(scalar_operator(mesh, 1.0));
  const ChebySmoother js(op);
  CHECK(js.upper() == doctest::Approx(11.0 * js.lower()));
  std::mt19937_64 rng(44);
  for (int t = 0; t < 20; ++t) {
    const Vector v = random_vector(op->rows(), rng), w = random_vector(op->rows(), rng);
    Vector sv(v.size()), sw(v.size());
    js.apply(v, sv);
    js.apply(w, sw);
    CHECK(std::abs(dot(sv, w) - dot(v, sw)) <= 1e-11 * norm2(sv) * norm2(w));
    CHECK(dot(sv, v) > 0.0);
  }
}

TEST_CASE("power iteration estimate") {
  const auto d = diagonal({1, 2, 3, 4, 5});
  const double est = estimate_lambda_max(d, std::vector<double>(5, 1.0), 200);
  CHECK(est == doctest::Approx(5.0).epsilon(1e-3));
  CHECK(est <= 5.0 + 1e-12);
}

TEST_CASE("prolongation") {
  const auto meshes = refine_hierarchy(kuhn_unit_tesseract(1), 1);
  const auto p = prolongation(meshes[0], meshes[1]);
  CHECK(p.rows() == meshes[1].vertex_count());
  CHECK(p.cols() == meshes[0].vertex_count());
  for (double v : p * Vector(p.cols(), 1.0)) CHECK(v == 1.0);
  const auto offs = p.row_offsets();
  for (std::size_t r = 0; r < p.rows(); ++r) {
    if (r < meshes[0].vertex_count()) {
      CHECK(offs[r + 1] - offs[r] == 1);
      CHECK(p.at(r, r) == 1.0);
    } else {
      CHECK(offs[r + 1] - offs[r] == 2);
      for (std::size_t q = offs[r]; q < offs[r + 1]; ++q) CHECK(p.values()[q] == 0.5);
    }
  }
  CHECK_THROWS_AS(prolongation(meshes[0], kuhn_unit_tesseract(2)), std::invalid_argument);
  CHECK_THROWS_AS(prolongation(meshes[1], meshes[0]), std::invalid_argument);
}

TEST_CASE("V-cycle") {
  const auto meshes = refine_hierarchy(kuhn_unit_tesseract(1), 3);
  std::mt19937_64 rng(45);

  SUBCASE("single level is a direct solve") {
    const auto h = Hierarchy::build(std::span(meshes).first(1), 1.0);
    const Vector b = random_vector(h.size(), rng);
    Vector x(b.size()), ax(b.size());
    h.vcycle(b, x);
    h.op(0).apply(x, ax);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(ax[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }

  SUBCASE("zero, symmetry and block application") {
    const auto h = Hierarchy::build(std::span(meshes).first(3), 1.0);
    Vector zero(h.size(), 0.0), out(h.size(), 1.0);
    h.vcycle(zero, out);
    for (double v : out) CHECK(v == 0.0);
    for (int t = 0; t < 20; ++t) {
      const Vector v = random_vector(h.size(), rng), w = random_vector(h.size(), rng);
      Vector bv(v.size()), bw(v.size());
      h.vcycle(v, bv);
      h.vcycle(w, bw);
      CHECK(std::abs(dot(bv, w) - dot(v, bw)) <= 1e-10 * norm2(bv) * norm2(w));
      CHECK(dot(bv, v) > 0.0);
    }

    const std::size_t n = h.size();
    const Vector blocks = random_vector(3 * n, rng);
    Vector out3(3 * n), single(n);
    b0_block_apply(h, 3, blocks, out3);
    for (std::size_t c = 0; c < 3; ++c) {
      h.vcycle(std::span(blocks).subspan(c * n, n), single);
      for (std::size_t i = 0; i < n; ++i) CHECK(out3[c * n + i] == single[i]);
    }
    // Permuting the blocks permutes the output.
    Vector swapped(3 * n), out_swapped(3 * n);
    std::copy(blocks.begin() + static_cast<long>(n), blocks.begin() + static_cast<long>(2 * n), swapped.begin());
    std::copy(blocks.begin(), blocks.begin() + static_cast<long>(n), swapped.begin() + static_cast<long>(n));
    std::copy(blocks.begin() + static_cast<long>(2 * n), blocks.end(), swapped.begin() + static_cast<long>(2 * n));
    b0_block_apply(h, 3, swapped, out_swapped);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(out_swapped[i] == out3[n + i]);
      CHECK(out_swapped[n + i] == out3[i]);
    }
    Vector one(n);
    b0_block_apply(h, 1, std::span(blocks).first(n), one);
    h.vcycle(std::span(blocks).first(n), single);
    CHECK(one == single);
    CHECK_THROWS_AS(b0_block_apply(h, 2, blocks, out3), std::invalid_argument);
  }

  SUBCASE("preconditioned CG iteration counts") {
    int prev = 0;
    for (int level = 1; level <= 3; ++level) {
      const auto h = Hierarchy::build(std::span(meshes).first(static_cast<std::size_t>(level) + 1), 1.0);
      const auto& a = h.op(level);
      const Vector b = random_vector(a.rows(), rng);
      const LinearOperator bop(h.size(), [&](std::span<const double> r, std::span<double> z) { h.vcycle(r, z); });
      const auto res = pcg(LinearOperator::from_matrix(a), bop, b, {1e-6, 500});
      CHECK(res.report.converged);
      CHECK(res.report.iterations <= 30);
      if (level > 1) CHECK(res.report.iterations <= prev + 6);
      prev = res.report.iterations;
    }
  }

  SUBCASE("Ritz values are positive") {
    for (double tau : {1e-6, 1.0, 1e6}) {
      const auto h = Hierarchy::build(std::span(meshes).first(3), tau);
      const LinearOperator bop(h.size(), [&](std::span<const double> r, std::span<double> z) { h.vcycle(r, z); });
      const auto est = condition_estimate(LinearOperator::from_matrix(h.op(2)), bop, 30, 1e-300);
      CHECK(est.lambda_min > 0.0);
    }
  }
}
