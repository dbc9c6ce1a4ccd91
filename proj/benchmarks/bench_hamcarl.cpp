#include <benchmark/benchmark.h>

#include <random>

#include "hamcarl/al_approx.hpp"
#include "hamcarl/isotopies.hpp"

using namespace hamcarl;

namespace {

FlowMap random_shears(int n, int count) {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const Mat omega = standard_symplectic(n);
  FlowMap m;
  for (int k = 0; k < count; ++k) {
    Vec c(n);
    for (int i = 0; i < n; ++i) c[i] = u(eng);
    m.then(PrimitiveFlow::shear(ShearTerm{u(eng), LinearForm{c.normalized()}, 1 + k % 4}, omega, u(eng)));
  }
  return m;
}

void BM_ShearApply(benchmark::State& state) {
  const FlowMap m = random_shears(2, static_cast<int>(state.range(0)));
  const Vec x = Vec::Constant(2, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(m.apply(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ShearApply)->Arg(10)->Arg(100)->Arg(1000);

void BM_ShearJacobian(benchmark::State& state) {
  const FlowMap m = random_shears(2, static_cast<int>(state.range(0)));
  const Vec x = Vec::Constant(2, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(m.apply_with_jacobian(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ShearJacobian)->Arg(10)->Arg(100)->Arg(1000);

void BM_Waring(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto alphas = monomials_up_to(n, 6, 6);
  for (auto _ : state) {
    for (const auto& a : alphas) benchmark::DoNotOptimize(waring_decompose(a));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(alphas.size()));
}
BENCHMARK(BM_Waring)->Arg(2)->Arg(4);

void BM_DecomposeField(benchmark::State& state) {
  Poly p(2);
  for (const auto& a : monomials_up_to(2, 1, static_cast<int>(state.range(0)))) p.add_term(a, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_field(p));
}
BENCHMARK(BM_DecomposeField)->Arg(6)->Arg(12);

void BM_ReferenceFlow(benchmark::State& state) {
  const auto field = twist_isotopy().field();
  const Vec x = (Vec(2) << 1.2, -0.7).finished();
  for (auto _ : state) benchmark::DoNotOptimize(variational_flow(field, x, 1.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ReferenceFlow)->Arg(1000)->Arg(10000);

// One level of the Carleman schedule on small grids, reference excluded.
void BM_CarlemanLevel(benchmark::State& state) {
  const auto iso = twist_isotopy();
  CarlemanConfig cfg;
  cfg.grid_per_axis = 11;
  cfg.complex_grid_per_axis = 5;
  cfg.reference_substeps = 2000;
  cfg.n_time = static_cast<int>(state.range(0));
  const auto ref = carleman_reference(iso, cfg, iso.a);
  for (auto _ : state) benchmark::DoNotOptimize(carleman_step(iso, cfg, &ref).report.c0);
}
BENCHMARK(BM_CarlemanLevel)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
