#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "z2h/asymptotics.hpp"
#include "z2h/donaldson.hpp"
#include "z2h/lawlor.hpp"
#include "z2h/zharmonic.hpp"

namespace {

using namespace z2h;

void BM_IntegrateSemiInfinite(benchmark::State& state) {
  const auto f = [](double u) { return 1.0 / std::sqrt((u * u + 4.0) * (u * u + 1.0)); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate_semi_infinite(f).value);
}
BENCHMARK(BM_IntegrateSemiInfinite);

void BM_FromCartesian(benchmark::State& state) {
  std::vector<double> h;
  for (int i = 0; i < state.range(0) - 1; ++i) h.push_back(static_cast<double>(state.range(0) - i));
  const HalfAxes axes(h);
  SeededSampler rng(1);
  std::vector<std::vector<double>> pts(64);
  for (auto& p : pts) {
    p = rng.unit_vector(axes.dim());
    for (auto& v : p) v *= 3.0;
  }
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(from_cartesian(axes, pts[k++ % pts.size()], Sheet::plus).mu.back());
}
BENCHMARK(BM_FromCartesian)->Arg(3)->Arg(4)->Arg(6);

void BM_Eval(benchmark::State& state) {
  FamilyOptions opts;
  opts.prefix_cache = state.range(1) != 0;
  std::vector<double> h;
  for (int i = 0; i < state.range(0) - 1; ++i) h.push_back(static_cast<double>(state.range(0) - i));
  const HarmonicFamily fam(HalfAxes(h), opts);
  SeededSampler rng(2);
  std::vector<std::vector<double>> pts(64);
  for (auto& p : pts) {
    p = rng.unit_vector(fam.dim());
    for (auto& v : p) v *= 2.5;
  }
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fam.eval(pts[k++ % pts.size()], Sheet::plus));
}
BENCHMARK(BM_Eval)->Args({3, 0})->Args({3, 1})->Args({4, 0})->Args({4, 1});

void BM_Coefficients(benchmark::State& state) {
  const std::vector<double> h{3.0, 2.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(coefficients(h).a0);
}
BENCHMARK(BM_Coefficients);

void BM_DonaldsonEval(benchmark::State& state) {
  const TwistorParams p(0.5);
  const std::vector<double> x{0.9, -0.4, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(donaldson_eval(p, x));
}
BENCHMARK(BM_DonaldsonEval);

void BM_LawlorPotential(benchmark::State& state) {
  const NeckParams c(small_angle_parameters(std::vector<double>{2.0, 1.0}, static_cast<double>(state.range(0))));
  const auto pt = make_neck_point({0.6, 0.48, 0.64}, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(potential(c, pt));
}
BENCHMARK(BM_LawlorPotential)->Arg(5)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
