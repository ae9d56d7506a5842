// Serial vs OpenMP versions of the parallel kernels.
#include <benchmark/benchmark.h>

#include <cmath>

#include "mtcrit/domain.hpp"
#include "mtcrit/variational.hpp"

namespace {

mtc::Exec exec_of(const benchmark::State& st) { return st.range(0) ? mtc::Exec::Parallel : mtc::Exec::Serial; }

void BM_FeEvaluate(benchmark::State& st) {
  const auto fam = mtc::Perturbation::zero();
  const auto grid = mtc::make_fe_grid(4000);
  std::vector<double> u(grid.free_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 2.0 * (1.0 - grid.r[i] * grid.r[i]);
  const auto I = mtc::moser_integrand(fam);
  for (auto _ : st) benchmark::DoNotOptimize(mtc::fe_evaluate(grid, I, u, exec_of(st)).value);
}
BENCHMARK(BM_FeEvaluate)->Arg(0)->Arg(1);

void BM_PolarIntegral(benchmark::State& st) {
  mtc::DomainSpec spec;
  spec.shape = mtc::Shape::Rectangle;
  spec.width = 2.0;
  const mtc::Domain dom(spec);
  const auto nodes = dom.polar_rule({0.7, 0.4});
  for (auto _ : st)
    benchmark::DoNotOptimize(mtc::integrate_nodes(
        nodes, [&](mtc::Point p) { return dom.green({0.7, 0.4}, p); }, exec_of(st)));
}
BENCHMARK(BM_PolarIntegral)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
