#include <benchmark/benchmark.h>

#include "bltk/finiteness.hpp"
#include "bltk/gaussian.hpp"
#include "bltk/kakeya.hpp"
#include "bltk/knapp.hpp"
#include "bltk/rng.hpp"

using namespace bltk;

namespace {

Matrix random_exact(int rows, int cols, SplitRng& rng) {
  Matrix m(rows, cols, ScalarMode::Exact);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.q(i, j) = static_cast<long>(rng.next_u64() % 7) - 3;
  return m;
}

BLDatum loomis_whitney() {
  BLDatum d;
  d.n = 3;
  for (int drop = 0; drop < 3; ++drop) {
    Matrix l(2, 3, ScalarMode::Exact);
    int r = 0;
    for (int i = 0; i < 3; ++i)
      if (i != drop) l.q(r++, i) = 1;
    d.maps.push_back(l);
  }
  std::vector<Exponent> ps(3, Exponent(Rational(2)));
  d.exponents = ExponentVector(std::move(ps));
  return d;
}

void bm_exact_rank(benchmark::State& state) {
  SplitRng rng(1);
  int n = static_cast<int>(state.range(0));
  Matrix m = random_exact(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(rank(m));
}
BENCHMARK(bm_exact_rank)->Arg(4)->Arg(8)->Arg(16);

void bm_fixed_point_step(benchmark::State& state) {
  BLDatum d = loomis_whitney().to_float();
  GaussianTuple a = GaussianTuple::identities(d);
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point_step(d, a));
}
BENCHMARK(bm_fixed_point_step);

void bm_bl_ratio(benchmark::State& state) {
  BLDatum d = loomis_whitney().to_float();
  GaussianTuple a = GaussianTuple::identities(d);
  for (auto _ : state) benchmark::DoNotOptimize(bl_ratio(d, a));
}
BENCHMARK(bm_bl_ratio);

void bm_compute_constant(benchmark::State& state) {
  BLDatum d = loomis_whitney().to_float();
  IterationOptions opts;
  opts.restarts = 0;
  for (auto _ : state) benchmark::DoNotOptimize(compute_constant(d, opts));
}
BENCHMARK(bm_compute_constant);

void bm_decide_finiteness(benchmark::State& state) {
  BLDatum d = loomis_whitney();
  SearchBudget budget;
  for (auto _ : state) benchmark::DoNotOptimize(decide_finiteness(d, budget));
}
BENCHMARK(bm_decide_finiteness);

void bm_slab_volume(benchmark::State& state) {
  SlabSet slab;
  Matrix b(3, 1, ScalarMode::Float);
  b.f(0, 0) = 1.0;
  b.f(1, 0) = 1.0;
  b.f(2, 0) = 0.0;
  slab.core = Subspace::span(b);
  slab.core_radius = 4.0;
  slab.thickness = 0.05;
  int cells = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(slab.box_counted_volume(cells));
}
BENCHMARK(bm_slab_volume)->Arg(64)->Arg(128);

void bm_tube_rasterization(benchmark::State& state) {
  Matrix e1(2, 1, ScalarMode::Float), e2(2, 1, ScalarMode::Float);
  e1.f(0, 0) = 1.0;
  e2.f(1, 0) = 1.0;
  std::vector<TubeFamily> fams = {
      random_tube_family(2, 1, Subspace::span(e1), 12, 1.0 / 32, 0.15, 5),
      random_tube_family(2, 1, Subspace::span(e2), 12, 1.0 / 32, 0.15, 6)};
  std::vector<Exponent> ps(2, Exponent(Rational(1)));
  ExponentVector p(std::move(ps));
  int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mkbl_check(fams, p, grid));
}
BENCHMARK(bm_tube_rasterization)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
