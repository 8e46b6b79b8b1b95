// Microbenchmarks for the three hot layers: jet evaluation of a parsed
// expression, point curvature of a statistical structure, and a full
// manifest run including the report serialization.

#include <benchmark/benchmark.h>

#include <vector>

#include "statsub/builtins.hpp"
#include "statsub/engine.hpp"
#include "statsub/expr.hpp"
#include "statsub/geometry.hpp"
#include "statsub/manifest.hpp"
#include "statsub/structure.hpp"

using namespace statsub;

static void BM_JetEval(benchmark::State& state) {
  const std::vector<std::string> coords = {"x1", "x2", "x3"};
  const Expression f =
      Expression::parse("sin(x1*x2) + exp(0.3*x3)/(2 + x1^2) - tanh(x2*x3)", coords);
  const std::vector<double> x = {0.4, -0.7, 0.2};
  for (auto _ : state) benchmark::DoNotOptimize(f.eval_jet(x));
}
BENCHMARK(BM_JetEval);

static void BM_PointCurvature(benchmark::State& state) {
  const Manifest man = builtin_example("warped-product");
  const StatisticalStructure& s = man.source;
  const std::vector<double> x = {0.3, -0.2, 0.5};
  for (auto _ : state) {
    const PointGeometry pg = point_geometry(s, x);
    benchmark::DoNotOptimize(curvature_tensor(pg, pg.gamma, s.convention));
  }
}
BENCHMARK(BM_PointCurvature);

static void BM_FullRun(benchmark::State& state) {
  const Manifest man = builtin_example("paper-example-7-2");
  for (auto _ : state) {
    const Report rep = run(man);
    benchmark::DoNotOptimize(rep.json_text.size());
  }
}
BENCHMARK(BM_FullRun);

BENCHMARK_MAIN();
