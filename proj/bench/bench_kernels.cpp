// OpenMP kernels against their single-threaded references.

#include <benchmark/benchmark.h>

#include <vector>

#include "dynsense/certify.hpp"
#include "dynsense/channel.hpp"
#include "dynsense/signal.hpp"

using namespace dynsense;

namespace {

struct GridScene {
  PathLossMatrix gains;
  SignalState state;
};

const GridScene& grid_scene() {
  static const GridScene scene = [] {
    Rng rng(1);
    GridScene s{build_path_loss_matrix(GridLayout::build(49, 7.0, rng), 1.0),
                SignalState(std::vector<bool>(49, false), 1.0)};
    s.state = initial_state(49, {0.1, 0.1, 1.0}, rng);
    return s;
  }();
  return scene;
}

Eigen::MatrixXd sign_matrix(Eigen::Index rows, Eigen::Index cols) {
  Rng rng(2);
  std::bernoulli_distribution coin(0.5);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = coin(rng) ? 1.0 : -1.0;
  return m;
}

struct CircularScene {
  CircularLayout layout;
  QuerySet query;
};

const CircularScene& circular_scene() {
  static const CircularScene scene = [] {
    Rng rng(3);
    const std::vector<double> radii{0.6, 1.4};
    auto layout = CircularLayout::build(16, 32, 2, 1.0, radii, rng);
    auto query = select_query_circular(layout, 8, rng);
    return CircularScene{std::move(layout), std::move(query)};
  }();
  return scene;
}

void BM_SampleSynthesis(benchmark::State& st) {
  const auto& s = grid_scene();
  const int window = static_cast<int>(st.range(0));
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(measure_window_samples(s.gains, s.state, window, 0.1, ++seed).z);
}

void BM_SampleSynthesisSerial(benchmark::State& st) {
  const auto& s = grid_scene();
  const int window = static_cast<int>(st.range(0));
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(measure_window_samples_serial(s.gains, s.state, window, 0.1, ++seed).z);
}

void BM_RipExhaustive(benchmark::State& st) {
  const Eigen::MatrixXd m = sign_matrix(16, 24);
  const auto order = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(estimate_rip_exhaustive(m, order).constant);
}

void BM_RipExhaustiveSerial(benchmark::State& st) {
  const Eigen::MatrixXd m = sign_matrix(16, 24);
  const auto order = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(estimate_rip_exhaustive_serial(m, order).constant);
}

void BM_Isotropy(benchmark::State& st) {
  const auto& s = circular_scene();
  const auto samples = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(certify_isotropy(s.layout, s.query, 1.0, samples, 7).max_deviation);
}

void BM_IsotropySerial(benchmark::State& st) {
  const auto& s = circular_scene();
  const auto samples = static_cast<std::size_t>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(certify_isotropy_serial(s.layout, s.query, 1.0, samples, 7).max_deviation);
}

}  // namespace

BENCHMARK(BM_SampleSynthesis)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SampleSynthesisSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RipExhaustive)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RipExhaustiveSerial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Isotropy)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IsotropySerial)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
