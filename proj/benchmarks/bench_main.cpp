#include <benchmark/benchmark.h>

#include <random>

#include "hx4d/auxiliary.hpp"
#include "hx4d/interp.hpp"
#include "hx4d/whitney.hpp"

using namespace hx4d;

namespace {

const Discretization& disc_at(int level) {
  static const Discretization d1(refine_hierarchy(kuhn_unit_tesseract(1), 1));
  static const Discretization d2(refine_hierarchy(kuhn_unit_tesseract(1), 2));
  return level == 1 ? d1 : d2;
}

Vector random_vector(std::size_t n) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  Vector x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

}  // namespace

static void BM_Refine(benchmark::State& state) {
  const Mesh4 coarse = refine_hierarchy(kuhn_unit_tesseract(1), static_cast<int>(state.range(0))).back();
  for (auto _ : state) benchmark::DoNotOptimize(bey_refine(coarse));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(coarse.element_count()));
}
BENCHMARK(BM_Refine)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

// args: degree, level
static void BM_MassAssembly(benchmark::State& state) {
  const auto& d = disc_at(static_cast<int>(state.range(1)));
  const auto sp = d.space(static_cast<int>(state.range(0)));
  const auto quad = gm_quadrature(2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_mass(sp, quad));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(d.mesh().element_count()));
}
BENCHMARK(BM_MassAssembly)->ArgsProduct({{0, 1, 2, 3}, {1, 2}})->Unit(benchmark::kMillisecond);

static void BM_Interpolant(benchmark::State& state) {
  const auto& m = disc_at(2).mesh();
  for (auto _ : state) benchmark::DoNotOptimize(interpolant_matrix(m, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Interpolant)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_SystemMatvec(benchmark::State& state) {
  const auto a = disc_at(2).system(static_cast<int>(state.range(0)), 1.0);
  const Vector x = random_vector(a->cols());
  Vector y(a->rows());
  for (auto _ : state) {
    a->apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(a->nnz()));
}
BENCHMARK(BM_SystemMatvec)->DenseRange(0, 3);

static void BM_VCycle(benchmark::State& state) {
  const auto h = disc_at(static_cast<int>(state.range(0))).scalar_hierarchy(1.0);
  const Vector b = random_vector(h->size());
  Vector x(b.size());
  for (auto _ : state) {
    h->vcycle(b, x);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_VCycle)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

// args: degree, level
static void BM_HxApply(benchmark::State& state) {
  const auto& d = disc_at(static_cast<int>(state.range(1)));
  const HxPreconditioner hx(d, static_cast<int>(state.range(0)), 1.0, d.scalar_hierarchy(1.0));
  const Vector r = random_vector(hx.size());
  Vector z(r.size());
  hx.apply(r, z);  // builds cached operators
  for (auto _ : state) {
    hx.apply(r, z);
    benchmark::DoNotOptimize(z.data());
  }
}
BENCHMARK(BM_HxApply)->ArgsProduct({{1, 2, 3}, {1, 2}})->Unit(benchmark::kMicrosecond);

static void BM_PcgSolve(benchmark::State& state) {
  const auto& d = disc_at(2);
  const HxPreconditioner hx(d, static_cast<int>(state.range(0)), 1.0, d.scalar_hierarchy(1.0));
  const Vector rhs = random_vector(hx.size());
  int iterations = 0;
  for (auto _ : state) {
    const auto res = pcg(hx.system_operator(), hx.as_operator(), rhs, {1e-6, 500});
    iterations = res.report.iterations;
    benchmark::DoNotOptimize(res.x.data());
  }
  state.counters["iters"] = iterations;
}
BENCHMARK(BM_PcgSolve)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
