#include <cmath>
#include <limits>
#include <string>

#include "dcopt/solvers.hpp"
#include "solver_common.hpp"

namespace dcopt {
namespace {

// Near-machine-precision subproblem accuracy; stands in for the analytical
// minimizer of the strongly convex subproblem.
constexpr double kSubproblemTolerance = 1e-12;
constexpr double kDescentSlack = 1e-9;

}  // namespace

SolveResult lpm_solve(const DCProblem& problem, const Vector& x0,
                      const SolverConfig& config) {
  internal::check_outer(problem, x0, config);
  if (!(config.lambda > 0)) {
    throw std::invalid_argument("config: lambda must be positive");
  }
  const double lf = problem.smooth.lipschitz_constant;
  const double mu = internal::resolve_mu(config, lf);
  const double lambda = config.lambda;
  const double coupling = internal::tau_or_zero(config, lf);
  const bool monitor = config.record_trace || config.check_invariants;

  SolveResult result;
  SolverTrace& trace = result.trace;
  internal::Stopwatch watch;

  double prev_objective = std::numeric_limits<double>::quiet_NaN();
  if (monitor) {
    prev_objective = evaluate_objective(problem, x0);
    if (config.record_trace) {
      TraceRecord r;
      r.k = 0;
      r.objective = prev_objective;
      r.merit = prev_objective;
      r.residual_norm = std::numeric_limits<double>::quiet_NaN();
      r.elapsed_seconds = watch.seconds();
      trace.records.push_back(r);
    }
  }

  Vector x = x0;
  long iter = 0;
  long extra_inner = 0;
  TerminationReason reason = TerminationReason::kMaxOuter;

  for (long k = 0; k < config.max_outer; ++k) {
    if (config.max_total > 0 && iter + extra_inner >= config.max_total) break;

    ContractionAnchor anchor{x, problem.concave_part.subgradient(x), lambda, mu};
    PicardResult picard =
        picard_solve(problem, anchor, x, kSubproblemTolerance, config.max_inner);
    if (!picard.converged) {
      throw ConvergenceError(
          "lpm_solve: subproblem did not reach target accuracy at outer "
          "iteration " + std::to_string(k),
          std::move(picard.final_point), picard.last_step_norm);
    }
    ++iter;
    extra_inner += picard.inner_iterations - 1;

    Vector candidate = std::move(picard.final_point);
    const double step = (candidate - x).norm();
    const double rel = internal::relative_change(candidate, x);

    if (monitor) {
      const double objective = evaluate_objective(problem, candidate);
      if (config.check_invariants && std::isfinite(prev_objective) &&
          objective > prev_objective + kDescentSlack) {
        ++trace.merit_violations;  // exact steps must not increase F
      }
      if (config.record_trace) {
        TraceRecord r;
        r.k = k + 1;
        r.objective = objective;
        r.merit = objective + coupling * step * step;
        r.inner_count = picard.inner_iterations;
        r.inner_step_norm = picard.last_step_norm;
        r.first_inner_step = picard.first_step_norm;
        r.step_norm = step;
        r.rel_change = rel;
        r.residual_norm = std::numeric_limits<double>::quiet_NaN();
        r.elapsed_seconds = watch.seconds();
        trace.records.push_back(r);
      }
      prev_objective = objective;
    }

    x = std::move(candidate);
    if (rel < config.tol) {
      reason = TerminationReason::kToleranceReached;
      break;
    }
  }

  trace.reason = reason;
  result.summary.outer_iterations = iter;
  result.summary.extra_inner_iterations = extra_inner;
  result.summary.total_iterations = iter + extra_inner;
  result.summary.wall_seconds = watch.seconds();
  result.summary.reason = reason;
  result.summary.converged = reason != TerminationReason::kMaxOuter;
  result.summary.final_objective = evaluate_objective(problem, x);
  result.x = std::move(x);
  return result;
}

}  // namespace dcopt
