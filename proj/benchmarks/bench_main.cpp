#include <benchmark/benchmark.h>

#include "iex/implicit_sampling.hpp"
#include "iex/limit_laws.hpp"
#include "iex/loss_expr.hpp"

using namespace iex;

namespace {

void BM_ParetoDraw(benchmark::State& state) {
  RngStream rng(1);
  const std::vector<double> alphas{1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(sample_pareto_vector(alphas, rng));
}
BENCHMARK(BM_ParetoDraw);

void BM_LimitLawDraw(benchmark::State& state) {
  RngStream crng(1, 0xC);
  const auto law = ImplicitMaxStableLaw::create(LossFunction::harmonic(2), 2.0,
                                                pareto_dirichlet_spectral({1.0, 1.0}), 10000, crng);
  RngStream rng(1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(law.sample(rng));
}
BENCHMARK(BM_LimitLawDraw);

void BM_RejectionLimitLawDraw(benchmark::State& state) {
  RngStream crng(1, 0xC);
  const auto law = ImplicitMaxStableLaw::create(LossFunction::min_loss(2), 2.0,
                                                pareto_dirichlet_spectral({1.0, 1.0}), 50000, crng);
  RngStream rng(1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(law.sample(rng));
}
BENCHMARK(BM_RejectionLimitLawDraw);

void BM_ImplicitArgmax(benchmark::State& state) {
  const auto f = LossFunction::harmonic(2);
  RngStream rng(2);
  std::vector<Point> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = sample_pareto_vector({1.0, 1.0}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(implicit_argmax(pts, f));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ImplicitArgmax)->Arg(100)->Arg(1000)->Arg(10000);

void BM_BlockMaxima(benchmark::State& state) {
  const auto model = pareto_model({1.0, 1.0});
  const auto f = LossFunction::harmonic(2);
  const auto a = NormalizingSequence::theoretical(2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        block_implicit_maxima(model, f, 1000, 20, a, 3, 1, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BlockMaxima)->Arg(1)->Arg(4);

void BM_ParseLoss(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(parse_loss_expr("1 / (1/pos(x1) + 1/pos(x2)) + pow(x1 * x2, 1/2)"));
}
BENCHMARK(BM_ParseLoss);

void BM_ExpressionEval(benchmark::State& state) {
  const auto e = parse_loss_expr("1 / (1/pos(x1) + 1/pos(x2))");
  const double x[] = {2.0, 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(e.eval(x));
}
BENCHMARK(BM_ExpressionEval);

}  // namespace

BENCHMARK_MAIN();
