#include <cmath>
#include <limits>

#include "dcopt/solvers.hpp"
#include "solver_common.hpp"

namespace dcopt {
namespace {

constexpr double kDescentSlack = 1e-9;

double require_positive_lipschitz(const DCProblem& problem) {
  const double lf = problem.smooth.lipschitz_constant;
  if (!(lf > 0)) {
    throw std::invalid_argument("proximal stepping needs a positive L_f");
  }
  return lf;
}

TraceRecord initial_record(double objective, double seconds) {
  TraceRecord r;
  r.k = 0;
  r.objective = objective;
  r.merit = objective;
  r.residual_norm = std::numeric_limits<double>::quiet_NaN();
  r.elapsed_seconds = seconds;
  return r;
}

TraceRecord step_record(long k, double objective, double merit, double step,
                        double rel, double seconds) {
  TraceRecord r;
  r.k = k;
  r.objective = objective;
  r.merit = merit;
  r.inner_count = 1;
  r.inner_step_norm = step;
  r.first_inner_step = step;
  r.step_norm = step;
  r.rel_change = rel;
  r.residual_norm = std::numeric_limits<double>::quiet_NaN();
  r.elapsed_seconds = seconds;
  return r;
}

}  // namespace

SolveResult pdca_solve(const DCProblem& problem, const Vector& x0,
                       const SolverConfig& config) {
  internal::check_outer(problem, x0, config);
  const double lf = require_positive_lipschitz(problem);
  const double step_size = 1.0 / lf;
  const double coupling = internal::tau_or_zero(config, lf);
  const bool monitor = config.record_trace || config.check_invariants;

  SolveResult result;
  SolverTrace& trace = result.trace;
  internal::Stopwatch watch;

  double prev_objective = std::numeric_limits<double>::quiet_NaN();
  if (monitor) {
    prev_objective = evaluate_objective(problem, x0);
    if (config.record_trace) {
      trace.records.push_back(initial_record(prev_objective, watch.seconds()));
    }
  }

  Vector x = x0;
  long iter = 0;
  TerminationReason reason = TerminationReason::kMaxOuter;

  for (long k = 0; k < config.max_outer; ++k) {
    if (config.max_total > 0 && iter >= config.max_total) break;

    const Vector eta = problem.concave_part.subgradient(x);
    Vector candidate = problem.prox_friendly.prox(
        x - step_size * (problem.smooth.gradient(x) - eta), step_size);
    ++iter;

    const double step = (candidate - x).norm();
    const double rel = internal::relative_change(candidate, x);

    if (monitor) {
      const double objective = evaluate_objective(problem, candidate);
      if (config.check_invariants && std::isfinite(prev_objective) &&
          objective > prev_objective + kDescentSlack) {
        ++trace.merit_violations;  // majorization makes the step monotone
      }
      if (config.record_trace) {
        trace.records.push_back(step_record(k + 1, objective,
                                            objective + coupling * step * step,
                                            step, rel, watch.seconds()));
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
  result.summary.extra_inner_iterations = 0;
  result.summary.total_iterations = iter;
  result.summary.wall_seconds = watch.seconds();
  result.summary.reason = reason;
  result.summary.converged = reason != TerminationReason::kMaxOuter;
  result.summary.final_objective = evaluate_objective(problem, x);
  result.x = std::move(x);
  return result;
}

SolveResult pdca_e_solve(const DCProblem& problem, const Vector& x0,
                         const SolverConfig& config) {
  internal::check_outer(problem, x0, config);
  const double lf = require_positive_lipschitz(problem);
  if (config.fixed_restart_period < 0) {
    throw std::invalid_argument("config: fixed_restart_period must be >= 0");
  }
  const double step_size = 1.0 / lf;
  const double coupling = internal::tau_or_zero(config, lf);
  const bool monitor = config.record_trace || config.check_invariants;

  SolveResult result;
  SolverTrace& trace = result.trace;
  internal::Stopwatch watch;

  if (config.record_trace) {
    trace.records.push_back(
        initial_record(evaluate_objective(problem, x0), watch.seconds()));
  }

  Vector x = x0;
  Vector x_prev = x0;  // extrapolation history starts flat
  double theta_prev = 1.0;
  double theta = 1.0;
  long iter = 0;
  TerminationReason reason = TerminationReason::kMaxOuter;

  for (long k = 0; k < config.max_outer; ++k) {
    if (config.max_total > 0 && iter >= config.max_total) break;

    if (k > 0) {
      const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      theta_prev = theta;
      theta = theta_next;
    }
    const double beta = (theta_prev - 1.0) / theta;

    const Vector y = x + beta * (x - x_prev);
    const Vector eta = problem.concave_part.subgradient(x);
    Vector candidate = problem.prox_friendly.prox(
        y - step_size * (problem.smooth.gradient(y) - eta), step_size);
    ++iter;

    const bool overshoot = (y - candidate).dot(candidate - x) > 0;
    if ((config.adaptive_restart && overshoot) ||
        (config.fixed_restart_period > 0 &&
         (k + 1) % config.fixed_restart_period == 0)) {
      theta_prev = 1.0;
      theta = 1.0;
    }

    const double step = (candidate - x).norm();
    const double rel = internal::relative_change(candidate, x);

    if (monitor && config.record_trace) {
      const double objective = evaluate_objective(problem, candidate);
      trace.records.push_back(step_record(k + 1, objective,
                                          objective + coupling * step * step,
                                          step, rel, watch.seconds()));
    }

    x_prev = std::move(x);
    x = std::move(candidate);
    if (rel < config.tol) {
      reason = TerminationReason::kToleranceReached;
      break;
    }
  }

  trace.reason = reason;
  result.summary.outer_iterations = iter;
  result.summary.extra_inner_iterations = 0;
  result.summary.total_iterations = iter;
  result.summary.wall_seconds = watch.seconds();
  result.summary.reason = reason;
  result.summary.converged = reason != TerminationReason::kMaxOuter;
  result.summary.final_objective = evaluate_objective(problem, x);
  result.x = std::move(x);
  return result;
}

}  // namespace dcopt
