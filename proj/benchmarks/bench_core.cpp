#include <benchmark/benchmark.h>

#include "funceq/corpus.hpp"
#include "funceq/hypotheses.hpp"
#include "funceq/solver.hpp"

namespace {

void BM_apply_operator(benchmark::State& state) {
  const auto spec = funceq::corpus_entry("ex3_7").build({}, static_cast<int>(state.range(0)));
  const funceq::TransferOperator op(spec);
  const funceq::GridFunction g = spec.inhom();
  for (auto _ : state) {
    funceq::GridFunction out = op.apply(g);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * (state.range(0) + 1));
}
BENCHMARK(BM_apply_operator)->Arg(256)->Arg(4096);

void BM_l1_norm(benchmark::State& state) {
  const auto h = funceq::GridFunction::sample(funceq::Expr::parse("(x+1)/(2-x)"),
                                              static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(h.l1_norm());
  }
}
BENCHMARK(BM_l1_norm)->Arg(256)->Arg(4096);

void BM_neumann_solve(benchmark::State& state) {
  const auto& entry = funceq::corpus_entry("sec5");
  const auto spec = entry.build({}, static_cast<int>(state.range(0)));
  const auto hint = entry.contraction_bound(entry.defaults());
  for (auto _ : state) {
    funceq::SolveResult r = funceq::neumann_solve(spec, 1e-6, 400, hint);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_neumann_solve)->Arg(256)->Arg(4096);

void BM_parse_and_differentiate(benchmark::State& state) {
  const std::string src = "mod1(2*x) + abs(x - 1/2)*(x+1)^1.25 / (1 + x/2)";
  for (auto _ : state) {
    funceq::Expr d = funceq::Expr::parse(src).derivative();
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_parse_and_differentiate);

void BM_hypothesis_report(benchmark::State& state) {
  const auto spec = funceq::corpus_entry("ex4_3").build({}, 1024);
  for (auto _ : state) {
    funceq::HypothesisReport r = funceq::analyze_hypotheses(spec);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_hypothesis_report);

}  // namespace

BENCHMARK_MAIN();
