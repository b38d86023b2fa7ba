#include <benchmark/benchmark.h>

#include <random>

#include "domp/bench_io.hpp"
#include "domp/certificates.hpp"
#include "domp/clusterability.hpp"
#include "domp/exact.hpp"
#include "domp/formulations.hpp"
#include "domp/ordered_median.hpp"

using namespace domp;

namespace {

Instance uniform(std::size_t m, const WeightSpec& spec, std::size_t p) {
  const GeneratedInstance g = generate_uniform(m, 2, 42);
  return Instance(g.dist, make_weights(spec, m), p, g.points);
}

}  // namespace

static void BM_OmEvaluate(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> d(m), w(m);
  for (double& x : d) x = u(rng);
  for (std::size_t r = 0; r < m; ++r) w[r] = static_cast<double>(m - r);
  for (auto _ : state) benchmark::DoNotOptimize(om_evaluate(d, w));
}
BENCHMARK(BM_OmEvaluate)->Arg(16)->Arg(256)->Arg(4096);

static void BM_Enumeration(benchmark::State& state) {
  const Instance inst = uniform(static_cast<std::size_t>(state.range(0)), WeightSpec::centdian(0.5), 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_enumeration(inst).value);
}
BENCHMARK(BM_Enumeration)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_BepRelaxation(benchmark::State& state) {
  const Instance inst = uniform(static_cast<std::size_t>(state.range(0)), WeightSpec::center(), 3);
  const DompModel model = build_bep(inst);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(model.lp).objective);
}
BENCHMARK(BM_BepRelaxation)->Arg(8)->Arg(14)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_OtRelaxation(benchmark::State& state) {
  const Instance inst = uniform(static_cast<std::size_t>(state.range(0)), WeightSpec::center(), 3);
  const DompModel model = build_ot(inst);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(model.lp).objective);
}
BENCHMARK(BM_OtRelaxation)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_CertificateSearch(benchmark::State& state) {
  const Instance inst = uniform(static_cast<std::size_t>(state.range(0)), WeightSpec::median(), 1);
  const CenterSolution sol = solve_enumeration(inst);
  for (auto _ : state) benchmark::DoNotOptimize(search_certificate(inst, sol).feasible);
}
BENCHMARK(BM_CertificateSearch)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_Dip(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(static_cast<std::size_t>(state.range(0)));
  for (double& x : s) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(dip_statistic(s).dip);
}
BENCHMARK(BM_Dip)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_Mds(benchmark::State& state) {
  const GeneratedInstance g = generate_uniform(static_cast<std::size_t>(state.range(0)), 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mds_1d(g.dist).eigenvalue);
}
BENCHMARK(BM_Mds)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_FloydWarshall(benchmark::State& state) {
  EdgeGraph g;
  g.n = static_cast<std::size_t>(state.range(0));
  g.p = 1;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> c(1, 100);
  for (std::size_t i = 0; i + 1 < g.n; ++i) g.edges.push_back({i, i + 1, static_cast<double>(c(rng))});
  for (std::size_t i = 0; i < g.n; ++i) g.edges.push_back({i, (i * 7 + 3) % g.n, static_cast<double>(c(rng))});
  g.declared_edges = g.edges.size();
  for (auto _ : state) benchmark::DoNotOptimize(floyd_warshall(g).max_entry());
}
BENCHMARK(BM_FloydWarshall)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
