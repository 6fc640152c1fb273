// Serial reference versus OpenMP path for the three parallel kernels: the
// per-direction error map, the spectral-radius grid search and the
// worst-case direction search. Run with OMP_NUM_THREADS set to the core count.

#include "tetdisp/kernels.hpp"
#include "tetdisp/study.hpp"
#include "tetdisp/sweep.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <numbers>

using namespace tetdisp;

namespace {

const MethodSetup& setup_for(const std::string& name) {
  static std::map<std::string, MethodSetup> cache;
  auto it = cache.find(name);
  if (it == cache.end())
    it = cache.emplace(name, prepare_method(parse_method(name), build_disphenoid_cell(), acoustic(1.0, 1.0))).first;
  return it->second;
}

ExecPolicy policy(const benchmark::State& state) {
  return state.range(0) ? ExecPolicy::parallel : ExecPolicy::serial;
}

void BM_DirectionMap(benchmark::State& state, const std::string& name) {
  const MethodSetup& s = setup_for(name);
  const std::vector<Vec3> dirs = fibonacci_sphere(64);
  const double kn = 2.0 * std::numbers::pi / wavelength_for_NE(s.disc.mesh, 8.0);
  for (auto _ : state) {
    auto errs = indexed_map<KappaErrors>(
        static_cast<int>(dirs.size()),
        [&](int i) { return kappa_errors(s.disc, kn * dirs[static_cast<size_t>(i)], s.scheme); }, policy(state));
    benchmark::DoNotOptimize(errs.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(dirs.size()));
}

void BM_SpectralRadius(benchmark::State& state, const std::string& name) {
  const MethodSetup& s = setup_for(name);
  SpectralSearchOptions o{9, 1e-6, 2, state.range(0) != 0};
  for (auto _ : state) benchmark::DoNotOptimize(spectral_radius_max(s.disc.ops, o).s_max);
}

void BM_WorstCase(benchmark::State& state, const std::string& name) {
  const MethodSetup& s = setup_for(name);
  DirectionSearchOptions o;
  o.directions = 100;
  o.restarts = 2;
  o.max_evals = 40;
  o.parallel = state.range(0) != 0;
  const double lambda = wavelength_for_NE(s.disc.mesh, 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(worst_case_over_directions(s.disc, lambda, s.scheme, o).e_disp);
}

}  // namespace

BENCHMARK_CAPTURE(BM_DirectionMap, ML2, std::string("ML2"))->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_DirectionMap, DG2a, std::string("DG2a"))->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SpectralRadius, ML2, std::string("ML2"))->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_WorstCase, DG1a, std::string("DG1a"))->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
