#include <benchmark/benchmark.h>

#include <vector>

#include "coupled/dynamics.hpp"
#include "coupled/eigen.hpp"
#include "coupled/generate.hpp"
#include "coupled/problems.hpp"
#include "coupled/random.hpp"
#include "coupled/rules_pca.hpp"
#include "coupled/rules_svd.hpp"

namespace {

using namespace coupled;

std::vector<double> geometric(std::size_t n) {
  std::vector<double> out;
  for (double x = 1.0; out.size() < n; x *= 0.7) out.push_back(x);
  return out;
}

void BM_SymEig(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Mat c = make_spd(geometric(n), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sym_eig(c));
}
BENCHMARK(BM_SymEig)->RangeMultiplier(2)->Range(4, 64);

void BM_GenEig(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(2);
  Mat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.gaussian();
  for (auto _ : state) benchmark::DoNotOptimize(gen_eig(a));
}
BENCHMARK(BM_GenEig)->RangeMultiplier(2)->Range(4, 64);

void BM_PcaRhs(benchmark::State& state) {
  const auto kind = static_cast<PcaRuleKind>(state.range(0));
  Mat c = make_spd(geometric(32), 3);
  PcaState s = pca_default_init(kind, c, 3, false);
  for (auto _ : state) benchmark::DoNotOptimize(pca_rhs(kind, c, s));
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_PcaRhs)->DenseRange(0, 3);

void BM_SvdRhs(benchmark::State& state) {
  const auto kind = static_cast<SvdRuleKind>(state.range(0));
  Mat a = make_cross(geometric(24), 32, 24, 4);
  SvdState s = svd_default_init(kind, a, 4, false);
  for (auto _ : state) benchmark::DoNotOptimize(svd_rhs(kind, a, s));
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_SvdRhs)->DenseRange(0, 3);

void BM_PcaOnlineStep(benchmark::State& state) {
  Mat c = make_spd(geometric(32), 5);
  std::vector<Vec> xs = sample_gaussian(c, 5, 1024);
  PcaState s = pca_default_init(PcaRuleKind::L2, c, 5, true);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pca_online_rhs(PcaRuleKind::L2, xs[k], s));
    k = (k + 1) % xs.size();
  }
}
BENCHMARK(BM_PcaOnlineStep);

void BM_Rk4Integrate(benchmark::State& state) {
  const auto steps = static_cast<std::size_t>(state.range(0));
  Mat c = make_spd(geometric(8), 6);
  PcaProblem p(c, PcaRuleKind::L2);
  Vec z0 = pca_default_init(PcaRuleKind::L2, c, 6, false).pack();
  const IntegratorOptions opts{0.05, steps, Method::rk4, steps};
  for (auto _ : state) benchmark::DoNotOptimize(integrate(p.as_field(), z0, opts));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * steps));
}
BENCHMARK(BM_Rk4Integrate)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
