#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dcone/closure.hpp"
#include "dcone/energy.hpp"
#include "dcone/folds.hpp"
#include "dcone/gamma_check.hpp"
#include "dcone/obstacle.hpp"
#include "dcone/recovery.hpp"

using namespace dcone;

namespace {

PeriodicField smooth(int n) {
  return PeriodicField::sample(make_grid(n), [](double t) { return 1.3 + 0.2 * std::cos(2 * t) + 0.1 * std::sin(5 * t); });
}

void BM_Deriv4(benchmark::State& st) {
  const PeriodicField w = smooth(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(deriv(w, 4));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Deriv4)->RangeMultiplier(4)->Range(256, 16384);

void BM_EnergyAndConstraint(benchmark::State& st) {
  const PeriodicField w = smooth(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    benchmark::DoNotOptimize(energy(w));
    benchmark::DoNotOptimize(constraint(w));
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_EnergyAndConstraint)->RangeMultiplier(4)->Range(256, 16384);

void BM_Gradients(benchmark::State& st) {
  const PeriodicField w = smooth(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(gradients(w));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Gradients)->RangeMultiplier(4)->Range(256, 16384);

void BM_MinimizeBump(benchmark::State& st) {
  SolverConfig cfg;
  cfg.n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(minimize(cfg, Preset::Bump));
}
BENCHMARK(BM_MinimizeBump)->Arg(512)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_MinimizeRandom(benchmark::State& st) {
  SolverConfig cfg;
  cfg.n = static_cast<int>(st.range(0));
  for (auto _ : st) {
    ++cfg.seed;
    benchmark::DoNotOptimize(minimize(cfg, Preset::Random));
  }
}
BENCHMARK(BM_MinimizeRandom)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_InvertG(benchmark::State& st) {
  const double alpha = 7.0;
  for (auto _ : st) benchmark::DoNotOptimize(invert_g(alpha, 0.0, Branch::Trig, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_InvertG)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_SolveSingleFold(benchmark::State& st) {
  const PeriodicGrid g = make_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(solve_single_fold(g));
}
BENCHMARK(BM_SolveSingleFold)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_FrameIntegrate(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  std::vector<double> kappa(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) kappa[j] = 0.3 * std::cos(kTwoPi * j / n);
  Frame f0;
  f0 << 0, 1, 0, 0, 0, -1, 1, 0, 0;  // rows T, T^U, U on the equator
  for (auto _ : st) benchmark::DoNotOptimize(frame_integrate(kappa, f0));
  st.SetItemsProcessed(st.iterations() * n);
}
BENCHMARK(BM_FrameIntegrate)->RangeMultiplier(4)->Range(1024, 16384);

void BM_GammaRow(benchmark::State& st) {
  const AdmissibleTriple t = triple_from_w(solve_single_fold(make_grid(4096)).candidate.w);
  const double h = 0.2 / static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(gamma_row(t, h));
}
BENCHMARK(BM_GammaRow)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SlopeFit(benchmark::State& st) {
  const std::vector<double> x = default_h_list();
  std::vector<double> y;
  for (double h : x) y.push_back(3.0 * std::pow(h, 4));
  for (auto _ : st) benchmark::DoNotOptimize(fit_loglog_slope(x, y));
}
BENCHMARK(BM_SlopeFit);

}  // namespace

BENCHMARK_MAIN();
