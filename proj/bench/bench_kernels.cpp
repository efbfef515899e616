// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "xsl/kernels.hpp"
#include "xsl/simlearner.hpp"
#include "xsl/trials.hpp"

using namespace xsl;

namespace {

struct Problem {
  std::size_t n, dim = 35, classes = 5;
  std::vector<double> x, w, b, gw, gb;
  std::vector<std::size_t> y, pred;

  explicit Problem(std::size_t n_) : n(n_), gw(classes * dim), gb(classes), pred(n_) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (std::size_t i = 0; i < n * dim; ++i) x.push_back(g(rng));
    for (std::size_t i = 0; i < classes * dim; ++i) w.push_back(0.1 * g(rng));
    for (std::size_t i = 0; i < classes; ++i) b.push_back(0.1 * g(rng));
    for (std::size_t i = 0; i < n; ++i) y.push_back(rng() % classes);
  }
  kernels::SoftmaxProblem view() const { return {x, y, n, dim, classes}; }
};

template <ExecPolicy P>
void BM_LossGrad(benchmark::State& state) {
  Problem p(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::softmax_loss_grad(P, p.view(), p.w, p.b, p.gw, p.gb));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <ExecPolicy P>
void BM_Predict(benchmark::State& state) {
  Problem p(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    kernels::predict_argmax(P, p.x, p.n, p.dim, p.classes, p.w, p.b, p.pred);
    benchmark::DoNotOptimize(p.pred.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <ExecPolicy P>
void BM_Trials(benchmark::State& state) {
  const auto world = generate_world(SynthWorldConfig{});
  const auto m = build_cooc(world.inventory);
  DesignSpec spec;
  spec.num_common = 3;
  spec.num_unique_per_action = 0;
  const LinearLearner learner({0.1, 200}, P);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trials(world.inventory, m, spec, learner, world.features, 4, P));
  }
}

}  // namespace

BENCHMARK(BM_LossGrad<ExecPolicy::serial>)->Arg(375)->Arg(15000);
BENCHMARK(BM_LossGrad<ExecPolicy::parallel>)->Arg(375)->Arg(15000);
BENCHMARK(BM_Predict<ExecPolicy::serial>)->Arg(15000);
BENCHMARK(BM_Predict<ExecPolicy::parallel>)->Arg(15000);
BENCHMARK(BM_Trials<ExecPolicy::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trials<ExecPolicy::parallel>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
