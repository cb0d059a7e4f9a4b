#include "dcopt/solvers.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dcopt/instance.hpp"
#include "dcopt/operators.hpp"
#include "dcopt/rng.hpp"
#include "oracles.hpp"

namespace {

using dcopt::Matrix;
using dcopt::SolverConfig;
using dcopt::TerminationReason;
using dcopt::Vector;

dcopt::DCProblem shifted_quadratic(const Vector& b) {
  dcopt::DCProblem problem;
  problem.dimension = b.size();
  problem.smooth.value = [b](const Vector& x) { return 0.5 * (x - b).squaredNorm(); };
  problem.smooth.gradient = [b](const Vector& x) { return Vector(x - b); };
  problem.smooth.lipschitz_constant = 1.0;
  problem.prox_friendly = dcopt::zero_prox_term();
  problem.concave_part = dcopt::zero_convex_term();
  return problem;
}

struct BuiltInstance {
  dcopt::DCProblem problem;
  Vector x0;
  double lf = 0.0;
};

BuiltInstance build(std::uint64_t seed, int m, int n, int k,
                    dcopt::RegularizerKind kind) {
  dcopt::InstanceSpec spec;
  spec.rows = m;
  spec.cols = n;
  spec.sparsity = k;
  spec.seed = seed;
  spec.regularizer = {kind, 0.01, 0.5};
  dcopt::Instance instance = dcopt::generate_instance(spec);
  const auto lf = dcopt::estimate_lipschitz(instance.data, 1e-10, 100000);
  BuiltInstance built;
  built.lf = lf.value;
  built.problem = dcopt::make_least_squares_problem(std::move(instance.data),
                                                    spec.regularizer, lf.value);
  built.x0 = dcopt::starting_point(spec);
  return built;
}

SolverConfig config_for(double lf, double lambda_multiple, double tol) {
  SolverConfig config;
  config.lambda = lambda_multiple * lf;
  config.delta = 1.99 * lambda_multiple;
  config.mu = 0.0;
  config.tol = tol;
  return config;
}

TEST(Tau, HandComputedValue) {
  const double lf = 1.0, lambda = 0.1;
  const double mu = dcopt::endpoint_mu(lambda, lf);
  const double delta = 1.99 * lambda / lf;
  const double value = dcopt::tau(lambda, mu, delta);
  EXPECT_NEAR(value, lf * lf * delta * delta / (8.0 * lambda), 1e-16);
  EXPECT_NEAR(value, 0.04950125, 1e-10);
  EXPECT_LT(value, lambda / 2.0);
}

TEST(Tau, QuadraticInDelta) {
  const double mu = dcopt::endpoint_mu(1.0, 1.0);
  EXPECT_LT(dcopt::tau(1.0, mu, 1e-8), 1e-15);
}

TEST(Tau, EndpointFormulasAgree) {
  dcopt::RandomStream stream(3);
  for (int trial = 0; trial < 50; ++trial) {
    const double lf = 0.5 + 10.0 * stream.uniform01();
    const double lambda = (0.05 + stream.uniform01()) * lf;
    const double delta = 1.9 * lambda / lf;
    const double mu = dcopt::endpoint_mu(lambda, lf);
    const double direct = dcopt::tau(lambda, mu, delta);
    const double endpoint = lf * lf * delta * delta / (8.0 * lambda);
    EXPECT_NEAR(direct, endpoint, 1e-14 * std::max(1.0, endpoint));
  }
}

TEST(Cdca, TrivialProblemReachesMinimizer) {
  Vector b(4);
  b << 1.0, -2.0, 0.5, 3.0;
  auto problem = shifted_quadratic(b);
  SolverConfig config;
  config.lambda = 0.1;
  config.delta = 1.99 * config.lambda;  // L_f = 1
  config.tol = 1e-8;
  const auto result = dcopt::cdca_solve(problem, Vector::Zero(4), config);
  EXPECT_TRUE(result.summary.converged);
  EXPECT_LE((result.x - b).norm(), 1e-6);
  EXPECT_EQ(result.trace.merit_violations, 0);
  // Without nonsmooth terms the gradient norm is the criticality residual;
  // at termination it sits at the (lambda + L_f)-scaled tolerance level.
  const Vector zero = Vector::Zero(4);
  EXPECT_LE(dcopt::criticality_residual(problem, result.x, zero, zero),
            10.0 * config.tol * std::max(1.0, b.norm()) * (config.lambda + 1.0));
}

TEST(Cdca, MeritMonotoneOnInstance) {
  auto built = build(101, 30, 128, 5, dcopt::RegularizerKind::kL1MinusL2);
  auto config = config_for(built.lf, 0.1, 1e-5);
  const auto result = dcopt::cdca_solve(built.problem, built.x0, config);
  EXPECT_TRUE(result.summary.converged);
  EXPECT_EQ(result.trace.merit_violations, 0);
  // Recorded merit column is nonincreasing outright.
  for (std::size_t i = 1; i < result.trace.records.size(); ++i) {
    EXPECT_LE(result.trace.records[i].merit,
              result.trace.records[i - 1].merit + 1e-9);
  }
}

TEST(Cdca, SummaryAccountsMatchTrace) {
  auto built = build(102, 20, 80, 4, dcopt::RegularizerKind::kL1MinusL2);
  auto config = config_for(built.lf, 0.1, 1e-4);
  const auto result = dcopt::cdca_solve(built.problem, built.x0, config);
  long iter = 0, extra = 0;
  for (const auto& r : result.trace.records) {
    if (r.k == 0) continue;
    ++iter;
    extra += r.inner_count - 1 + (r.extra_applied ? 1 : 0);
  }
  EXPECT_EQ(result.summary.outer_iterations, iter);
  EXPECT_EQ(result.summary.extra_inner_iterations, extra);
  EXPECT_EQ(result.summary.total_iterations,
            result.summary.outer_iterations +
                result.summary.extra_inner_iterations);
}

TEST(Cdca, StationaryPointDetectedExactly) {
  // Strong l1 pull and a zero start: the frozen map fixes the origin exactly.
  dcopt::DCProblem problem;
  problem.dimension = 2;
  problem.smooth.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  problem.smooth.gradient = [](const Vector& x) { return x; };
  problem.smooth.lipschitz_constant = 1.0;
  dcopt::RegularizerSpec spec{dcopt::RegularizerKind::kL1MinusL2, 50.0, 0.5};
  auto [g, h] = dcopt::l1_minus_l2_split(spec);
  problem.prox_friendly = g;
  problem.concave_part = dcopt::zero_convex_term();

  SolverConfig config;
  config.lambda = 0.5;
  config.delta = 0.9;
  config.tol = 1e-10;
  const auto result = dcopt::cdca_solve(problem, Vector::Zero(2), config);
  EXPECT_EQ(result.summary.reason, TerminationReason::kStationaryDetected);
  EXPECT_EQ(result.x.norm(), 0.0);
  // An exact fixed point harvests a perfect criticality certificate.
  const double mu = dcopt::endpoint_mu(config.lambda, 1.0);
  const Vector u = result.x - mu * problem.smooth.gradient(result.x);
  const Vector xi = (u - result.x) / mu;
  EXPECT_LE(dcopt::criticality_residual(problem, result.x,
                                        Vector::Zero(2), xi),
            1e-8);
}

TEST(Cdca, SquaredStepSumBounded) {
  auto built = build(103, 25, 100, 5, dcopt::RegularizerKind::kL1MinusL2);
  auto config = config_for(built.lf, 0.1, 1e-5);
  const auto result = dcopt::cdca_solve(built.problem, built.x0, config);
  ASSERT_TRUE(result.summary.converged);

  const double coupling =
      dcopt::tau(config.lambda, dcopt::endpoint_mu(config.lambda, built.lf),
                 config.delta);
  double sum = 0.0;
  for (const auto& r : result.trace.records) {
    if (r.k > 0) sum += r.step_norm * r.step_norm;
  }
  const double f0 = result.trace.records.front().objective;
  const double gap0 = result.trace.records.front().step_norm;  // ||x0 - x^{-1}||
  const double bound = (f0 - result.summary.final_objective +
                        coupling * gap0 * gap0) /
                       (config.lambda / 2.0 - coupling);
  EXPECT_LE(sum, bound + 1e-6);
}

TEST(Cdca, ObjectiveSettlesNearTermination) {
  auto built = build(104, 30, 128, 5, dcopt::RegularizerKind::kL1MinusL2);
  auto config = config_for(built.lf, 0.1, 1e-5);
  const auto result = dcopt::cdca_solve(built.problem, built.x0, config);
  ASSERT_TRUE(result.summary.converged);
  const auto& records = result.trace.records;
  ASSERT_GE(records.size(), 10u);
  double lo = records.back().objective, hi = lo;
  for (std::size_t i = records.size() - 10; i < records.size(); ++i) {
    lo = std::min(lo, records[i].objective);
    hi = std::max(hi, records[i].objective);
  }
  EXPECT_LE(hi - lo,
            10.0 * config.tol * (1.0 + std::abs(result.summary.final_objective)));
}

TEST(Cdca, ResidualBoundHoldsOnSmoothFamily) {
  auto built = build(105, 30, 128, 5, dcopt::RegularizerKind::kLogarithmic);
  auto config = config_for(built.lf, 0.1, 1e-4);
  const auto result = dcopt::cdca_solve(built.problem, built.x0, config);
  EXPECT_TRUE(result.summary.converged);
  EXPECT_EQ(result.trace.residual_bound_violations, 0);
  bool saw_residual = false;
  for (const auto& r : result.trace.records) {
    if (r.k > 0 && std::isfinite(r.residual_norm)) saw_residual = true;
  }
  EXPECT_TRUE(saw_residual);
}

TEST(Cdca, BudgetExhaustionReported) {
  auto built = build(106, 20, 60, 4, dcopt::RegularizerKind::kL1MinusL2);
  auto config = config_for(built.lf, 0.1, 1e-12);
  config.max_outer = 5;
  const auto result = dcopt::cdca_solve(built.problem, built.x0, config);
  EXPECT_FALSE(result.summary.converged);
  EXPECT_EQ(result.summary.reason, TerminationReason::kMaxOuter);
  EXPECT_EQ(result.summary.outer_iterations, 5);
}

TEST(Cdca, TotalIterationCapRespected) {
  auto built = build(107, 20, 60, 4, dcopt::RegularizerKind::kL1MinusL2);
  auto config = config_for(built.lf, 0.1, 1e-12);
  config.max_total = 10;
  const auto result = dcopt::cdca_solve(built.problem, built.x0, config);
  EXPECT_FALSE(result.summary.converged);
  EXPECT_GE(result.summary.total_iterations, 10);
  // Overshoot is at most one inner loop of the final outer iteration.
  EXPECT_LE(result.summary.outer_iterations, 11);
}

TEST(Cdca, RejectsBadDelta) {
  auto problem = shifted_quadratic(Vector::Zero(2));
  SolverConfig config;
  config.lambda = 0.1;
  config.delta = 0.3;  // above 2 lambda / L_f = 0.2
  EXPECT_THROW(dcopt::cdca_solve(problem, Vector::Zero(2), config),
               std::invalid_argument);
}

TEST(Lpm, ScalarProximalRecursion) {
  Vector b(1);
  b << 2.0;
  auto problem = shifted_quadratic(b);
  SolverConfig config;
  config.lambda = 1.0;
  config.tol = 1e-9;
  config.max_outer = 1;
  Vector x0 = Vector::Zero(1);
  auto first = dcopt::lpm_solve(problem, x0, config);
  EXPECT_NEAR(first.x[0], 1.0, 1e-9);
  config.max_outer = 2;
  auto second = dcopt::lpm_solve(problem, x0, config);
  EXPECT_NEAR(second.x[0], 1.5, 1e-9);
}

TEST(Lpm, TrivialProblemConvergesToMinimizer) {
  Vector b(3);
  b << -1.0, 2.0, 4.0;
  auto problem = shifted_quadratic(b);
  SolverConfig config;
  config.lambda = 1.0;
  config.tol = 1e-10;
  const auto result = dcopt::lpm_solve(problem, Vector::Zero(3), config);
  EXPECT_TRUE(result.summary.converged);
  EXPECT_LE((result.x - b).norm(), 1e-8);
  EXPECT_EQ(result.trace.merit_violations, 0);  // F nonincreasing
}

TEST(Lpm, AgreesWithTightCdca) {
  auto built = build(108, 20, 64, 3, dcopt::RegularizerKind::kL1MinusL2);
  auto lpm_config = config_for(built.lf, 0.1, 1e-6);
  const auto lpm = dcopt::lpm_solve(built.problem, built.x0, lpm_config);

  auto cdca_config = config_for(built.lf, 0.1, 1e-6);
  cdca_config.delta = 1e-6 * 0.1;  // near-exact inner solves
  const auto cdca = dcopt::cdca_solve(built.problem, built.x0, cdca_config);

  ASSERT_TRUE(lpm.summary.converged);
  ASSERT_TRUE(cdca.summary.converged);
  EXPECT_NEAR(lpm.summary.final_objective, cdca.summary.final_objective, 1e-6);
}

TEST(Pdca, PlainGradientDescentWhenUnregularized) {
  Vector b(2);
  b << 2.0, -2.0;
  auto problem = shifted_quadratic(b);
  SolverConfig config;
  config.tol = 1e-10;
  config.max_outer = 1;
  const Vector x0 = Vector::Zero(2);
  const auto result = dcopt::pdca_solve(problem, x0, config);
  // One step of gradient descent with step 1/L_f = 1 lands on b.
  EXPECT_LE((result.x - b).norm(), 1e-12);
}

TEST(Pdca, ScalarProxStep) {
  dcopt::DCProblem problem;
  problem.dimension = 1;
  problem.smooth.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  problem.smooth.gradient = [](const Vector& x) { return x; };
  problem.smooth.lipschitz_constant = 1.0;
  dcopt::RegularizerSpec spec{dcopt::RegularizerKind::kL1MinusL2, 1.0, 0.5};
  auto [g, h] = dcopt::l1_minus_l2_split(spec);
  problem.prox_friendly = g;
  problem.concave_part = dcopt::zero_convex_term();

  SolverConfig config;
  config.tol = 1e-10;
  config.max_outer = 1;
  Vector x0(1);
  x0 << 3.0;
  const auto result = dcopt::pdca_solve(problem, x0, config);
  EXPECT_EQ(result.x[0], 0.0);  // prox at 3 - 3 = 0 stays 0
}

TEST(Pdca, DescentHoldsOnInstance) {
  auto built = build(109, 25, 90, 5, dcopt::RegularizerKind::kL1MinusL2);
  SolverConfig config;
  config.tol = 1e-5;
  const auto result = dcopt::pdca_solve(built.problem, built.x0, config);
  EXPECT_TRUE(result.summary.converged);
  EXPECT_EQ(result.trace.merit_violations, 0);
}

TEST(PdcaE, UnitRestartPeriodReducesToPdca) {
  auto built = build(110, 20, 70, 4, dcopt::RegularizerKind::kL1MinusL2);
  SolverConfig config;
  config.tol = 1e-5;
  const auto plain = dcopt::pdca_solve(built.problem, built.x0, config);

  SolverConfig restarting = config;
  restarting.fixed_restart_period = 1;  // forces beta == 0 everywhere
  const auto extrapolated = dcopt::pdca_e_solve(built.problem, built.x0, restarting);

  EXPECT_EQ(plain.summary.outer_iterations,
            extrapolated.summary.outer_iterations);
  EXPECT_LE((plain.x - extrapolated.x).norm(), 1e-14);
}

TEST(PdcaE, MomentumSilentForTwoStepsOnly) {
  auto built = build(111, 20, 70, 4, dcopt::RegularizerKind::kL1MinusL2);
  SolverConfig config;
  config.tol = 1e-12;
  config.adaptive_restart = false;
  config.fixed_restart_period = 0;

  SolverConfig two = config;
  two.max_outer = 2;
  const auto a = dcopt::pdca_e_solve(built.problem, built.x0, two);
  const auto b = dcopt::pdca_solve(built.problem, built.x0, two);
  EXPECT_LE((a.x - b.x).norm(), 1e-14);  // theta history gives beta_0 = beta_1 = 0

  SolverConfig three = config;
  three.max_outer = 3;
  const auto a3 = dcopt::pdca_e_solve(built.problem, built.x0, three);
  const auto b3 = dcopt::pdca_solve(built.problem, built.x0, three);
  EXPECT_GT((a3.x - b3.x).norm(), 1e-12);  // beta_2 = (theta_1 - 1)/theta_2 > 0
}

TEST(PdcaE, ConvergesOnInstance) {
  auto built = build(112, 30, 100, 5, dcopt::RegularizerKind::kL1MinusL2);
  SolverConfig config;
  config.tol = 1e-5;
  const auto result = dcopt::pdca_e_solve(built.problem, built.x0, config);
  EXPECT_TRUE(result.summary.converged);
  EXPECT_EQ(result.summary.total_iterations, result.summary.outer_iterations);
}

TEST(Adca, FirstStepMatchesClosedForm) {
  auto built = build(113, 15, 40, 3, dcopt::RegularizerKind::kL1MinusL2);
  const double rho = 1.1 * built.lf;
  SolverConfig config;
  config.tol = 1e-10;
  config.max_outer = 1;
  const auto result = dcopt::adca_solve(built.problem, built.x0, config, 5, rho);

  // k = 0 has no extrapolation: v = x0 and the update is one prox step.
  const Vector eta = built.problem.concave_part.subgradient(built.x0);
  const Vector y = rho * built.x0 - built.problem.smooth.gradient(built.x0) + eta;
  const Vector expected = built.problem.prox_friendly.prox(y / rho, 1.0 / rho);
  EXPECT_LE((result.x - expected).norm(), 1e-14);
}

TEST(Adca, SubproblemIdentityAgainstGrid) {
  dcopt::RandomStream stream(29);
  dcopt::RegularizerSpec spec{dcopt::RegularizerKind::kL1MinusL2, 1.0, 0.5};
  auto [g, h] = dcopt::l1_minus_l2_split(spec);
  for (int trial = 0; trial < 20; ++trial) {
    const double rho = 0.5 + 2.0 * stream.uniform01();
    const double c = 4.0 * stream.uniform01() - 2.0;
    Vector y(1);
    y << c;
    const double fast = g.prox(y / rho, 1.0 / rho)[0];
    const double slow = oracles::grid_quad_l1(rho, 1.0, c, std::abs(c) / rho + 1.0);
    EXPECT_NEAR(fast, slow, 2e-6);
  }
}

TEST(Adca, ConvergesAndRejectsBadRho) {
  auto built = build(114, 25, 80, 4, dcopt::RegularizerKind::kL1MinusL2);
  SolverConfig config;
  config.tol = 1e-5;
  const auto result =
      dcopt::adca_solve(built.problem, built.x0, config, 5, 1.1 * built.lf);
  EXPECT_TRUE(result.summary.converged);
  // A single-entry objective window still works.
  const auto strict =
      dcopt::adca_solve(built.problem, built.x0, config, 0, 1.1 * built.lf);
  EXPECT_TRUE(strict.summary.converged);
  EXPECT_NEAR(strict.summary.final_objective, result.summary.final_objective,
              1e-3);
  EXPECT_THROW(
      dcopt::adca_solve(built.problem, built.x0, config, 5, 0.9 * built.lf),
      std::invalid_argument);
  EXPECT_THROW(dcopt::adca_solve(built.problem, built.x0, config, -1,
                                 1.1 * built.lf),
               std::invalid_argument);
}

TEST(WriteTrace, HeaderAndMonotoneMerit) {
  auto built = build(115, 20, 64, 3, dcopt::RegularizerKind::kL1MinusL2);
  auto config = config_for(built.lf, 0.1, 1e-4);
  const auto result = dcopt::cdca_solve(built.problem, built.x0, config);
  std::ostringstream out;
  dcopt::write_trace(out, result.trace);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "k,F,E,m_k,rel_change,elapsed_seconds");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, result.trace.records.size());
}

}  // namespace
