#include <benchmark/benchmark.h>

#include <blackwell/axioms.hpp>
#include <blackwell/ordering.hpp>

using namespace blackwell;

namespace {

Mdp bench_mdp(std::uint64_t seed, int states, int actions) {
  Rng rng(seed);
  // Fix the size by resampling until the generator hits it; keeps the
  // benchmark input deterministic without a second generator API.
  while (true) {
    Mdp mdp = gen_mdp(rng, {states, actions, 8, 8});
    if (static_cast<int>(mdp.num_states()) == states &&
        static_cast<int>(mdp.num_actions()) == actions)
      return mdp;
  }
}

StationaryStream bench_stream(std::uint64_t seed) {
  const Mdp mdp = bench_mdp(seed, 4, 1);
  return make_stationary_stream(mdp, DecisionRule{{0, 0, 0, 0}}, 0);
}

void BM_GenerateStream(benchmark::State& state) {
  const Mdp mdp = bench_mdp(1, 4, 2);
  const PolicySpec policy = PolicySpec::stationary(DecisionRule{{0, 1, 0, 1}});
  for (auto _ : state)
    benchmark::DoNotOptimize(generate_stream(mdp, policy, 0, state.range(0)));
}
BENCHMARK(BM_GenerateStream)->Arg(16)->Arg(64)->Arg(256);

void BM_LimitingMatrix(benchmark::State& state) {
  const StationaryStream stream = bench_stream(2);
  for (auto _ : state) benchmark::DoNotOptimize(limiting_matrix(stream.transition));
}
BENCHMARK(BM_LimitingMatrix);

void BM_Decompose(benchmark::State& state) {
  const StationaryStream stream = bench_stream(3);
  const std::int64_t horizon = default_decompose_horizon(stream);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(stream, horizon));
}
BENCHMARK(BM_Decompose);

void BM_AnalyzeChain(benchmark::State& state) {
  const StationaryStream stream = bench_stream(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(analyze_chain(stream.transition, stream.reward));
}
BENCHMARK(BM_AnalyzeChain);

void BM_LaurentSignature(benchmark::State& state) {
  const StationaryStream u = bench_stream(5);
  const StationaryStream v = bench_stream(6);
  for (auto _ : state) benchmark::DoNotOptimize(laurent_signature(u, v));
}
BENCHMARK(BM_LaurentSignature);

void BM_ComparePair(benchmark::State& state) {
  const StreamAnalysis u = analyze(bench_stream(7));
  const StreamAnalysis v = analyze(bench_stream(8));
  for (auto _ : state) {
    benchmark::DoNotOptimize(blackwell_compare(u, v));
    benchmark::DoNotOptimize(avg_overtaking_compare(u, v));
  }
}
BENCHMARK(BM_ComparePair);

void BM_EpAlgebra(benchmark::State& state) {
  Rng rng(9);
  const EpStream u = gen_ep_stream(rng);
  const EpStream v = gen_ep_stream(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cesaro_of_partial_sums(subtract(u, v)));
  }
}
BENCHMARK(BM_EpAlgebra);

void BM_CoincidenceSweepOneMdp(benchmark::State& state) {
  const Mdp mdp = bench_mdp(10, 3, 2);
  Rng rng(11);
  for (auto _ : state) benchmark::DoNotOptimize(check_theorem1(mdp, rng, 8));
}
BENCHMARK(BM_CoincidenceSweepOneMdp);

void BM_FindOptimalAllStates(benchmark::State& state) {
  const Mdp mdp = bench_mdp(12, 4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(find_blackwell_optimal_all_states(mdp));
}
BENCHMARK(BM_FindOptimalAllStates);

}  // namespace

BENCHMARK_MAIN();
