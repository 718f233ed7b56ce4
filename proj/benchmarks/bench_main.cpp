#include <vector>

#include <benchmark/benchmark.h>

#include "octk/continuation.hpp"
#include "octk/integrate.hpp"
#include "octk/recognition.hpp"

using namespace octk;

static void BM_SigmoidJet(benchmark::State& state) {
  const auto s = SigmoidFamily::tanh();
  const int order = static_cast<int>(state.range(0));
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.eval_jet(x, order));
    x += 1e-9;
  }
}
BENCHMARK(BM_SigmoidJet)->Arg(2)->Arg(4)->Arg(6);

static void BM_RecognizeWcuspCircuit(benchmark::State& state) {
  const auto g = wcusp_circuit(SigmoidFamily::tanh(), 0.5);
  const ParamVector p{{"alpha", 0.0}, {"beta", 0.0}, {"gamma", 0.0}};
  for (auto _ : state) benchmark::DoNotOptimize(check_wcusp(g, 0.0, 0.0, p));
}
BENCHMARK(BM_RecognizeWcuspCircuit);

static void BM_TraceHysteresis(benchmark::State& state) {
  const auto p = normal_form(NormalForm::hysteresis_unfolding);
  for (auto _ : state) benchmark::DoNotOptimize(trace(p, {{"beta", 1.0}}, {-1.0, 1.0}, {-1.5, 1.5}));
}
BENCHMARK(BM_TraceHysteresis)->Unit(benchmark::kMillisecond);

static void BM_IntegrateRelaxation(benchmark::State& state) {
  const auto ode = circuit_ode(CircuitKind::relaxation, SigmoidFamily::tanh(), {{"beta", 0.5}},
                               {0.01, 1.0});
  const std::vector<double> x0{1e-3, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(ode, InputSignal::constant(0.0), x0, 50.0));
  }
}
BENCHMARK(BM_IntegrateRelaxation)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
