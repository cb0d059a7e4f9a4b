// Microbenchmarks for the hot kernels: shrinkage, least-squares gradient,
// one frozen-map application, one full inner solve, and a small end-to-end
// run. Build with Release; numbers from Debug builds are meaningless.

#include <benchmark/benchmark.h>

#include "dcopt/benchmark.hpp"

namespace {

using dcopt::ContractionAnchor;
using dcopt::Vector;

dcopt::InstanceSpec bench_spec(int m, int n, int k) {
  dcopt::InstanceSpec spec;
  spec.rows = m;
  spec.cols = n;
  spec.sparsity = k;
  spec.seed = 1;
  spec.regularizer = {dcopt::RegularizerKind::kL1MinusL2, 0.01, 0.5};
  return spec;
}

struct Fixture {
  dcopt::DCProblem problem;
  Vector x0;
  double lf = 0.0;
  ContractionAnchor anchor;
};

Fixture make_fixture(int m, int n, int k) {
  const auto spec = bench_spec(m, n, k);
  auto instance = dcopt::generate_instance(spec);
  const auto lf = dcopt::estimate_lipschitz(instance.data, 1e-9, 100000);
  Fixture fixture;
  fixture.lf = lf.value;
  fixture.x0 = dcopt::starting_point(spec);
  fixture.problem = dcopt::make_least_squares_problem(std::move(instance.data),
                                                      spec.regularizer, lf.value);
  const double lambda = 0.1 * lf.value;
  fixture.anchor = ContractionAnchor{
      fixture.x0, fixture.problem.concave_part.subgradient(fixture.x0), lambda,
      dcopt::endpoint_mu(lambda, lf.value)};
  return fixture;
}

void BM_SoftThreshold(benchmark::State& state) {
  dcopt::RandomStream stream(3);
  const Vector x = stream.gaussian_vector(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dcopt::soft_threshold_prox(x, 0.01));
  }
}
BENCHMARK(BM_SoftThreshold)->Arg(512)->Arg(5120);

void BM_LeastSquaresGradient(benchmark::State& state) {
  const auto fixture = make_fixture(static_cast<int>(state.range(0)),
                                    static_cast<int>(state.range(0)) * 4, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fixture.problem.smooth.gradient(fixture.x0));
  }
}
BENCHMARK(BM_LeastSquaresGradient)->Arg(120)->Arg(480);

void BM_ApplyMap(benchmark::State& state) {
  const auto fixture = make_fixture(120, 512, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dcopt::apply_map(fixture.problem, fixture.anchor, fixture.x0));
  }
}
BENCHMARK(BM_ApplyMap);

void BM_PicardSolve(benchmark::State& state) {
  const auto fixture = make_fixture(120, 512, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dcopt::picard_solve(
        fixture.problem, fixture.anchor, fixture.x0, 1e-6, 10000));
  }
}
BENCHMARK(BM_PicardSolve);

void BM_CdcaSolveSmall(benchmark::State& state) {
  const auto fixture = make_fixture(60, 256, 10);
  dcopt::SolverConfig config;
  config.lambda = 0.1 * fixture.lf;
  config.delta = 0.199;
  config.tol = 1e-4;
  config.check_invariants = false;
  config.record_trace = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dcopt::cdca_solve(fixture.problem, fixture.x0, config));
  }
}
BENCHMARK(BM_CdcaSolveSmall);

}  // namespace

BENCHMARK_MAIN();
