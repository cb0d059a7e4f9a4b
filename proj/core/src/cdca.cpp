#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "dcopt/solvers.hpp"
#include "solver_common.hpp"

namespace dcopt {
namespace {

constexpr double kMeritSlack = 1e-9;
constexpr double kResidualSlack = 1e-8;

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

SolveResult cdca_solve(const DCProblem& problem, const Vector& x0,
                       const SolverConfig& config) {
  internal::check_outer(problem, x0, config);
  const double lf = problem.smooth.lipschitz_constant;
  if (!(config.lambda > 0)) {
    throw std::invalid_argument("config: lambda must be positive");
  }
  if (!(config.delta > 0) ||
      (lf > 0 && !(config.delta < 2.0 * config.lambda / lf))) {
    throw std::invalid_argument("config: delta must lie in (0, 2 lambda / L_f)");
  }
  const double mu = internal::resolve_mu(config, lf);
  for (double w : config.inertial_weights) {
    if (!std::isfinite(w)) {
      throw std::invalid_argument("config: inertial weights must be finite");
    }
  }

  const double lambda = config.lambda;
  const double coupling = tau(lambda, mu, config.delta);
  const double shrink = 1.0 - mu * lambda;
  const bool monitor = config.record_trace || config.check_invariants;
  const std::optional<double> lh = problem.concave_part.gradient_lipschitz;

  // history[j] = x^{k-j}. Warm-start needs one point per weight plus one;
  // x^{-1} = x0 + ones (the start must differ from x0), deeper entries x0.
  std::deque<Vector> history;
  history.push_back(x0);
  history.push_back(x0 + Vector::Ones(problem.dimension));
  while (history.size() < config.inertial_weights.size() + 2) {
    history.push_back(x0);
  }

  SolveResult result;
  SolverTrace& trace = result.trace;
  internal::Stopwatch watch;

  double prev_outer_step = (x0 - history[1]).norm();
  double prev_merit = quiet_nan();
  if (monitor) {
    const double f0 = evaluate_objective(problem, x0);
    prev_merit = f0 + coupling * prev_outer_step * prev_outer_step;
    if (config.record_trace) {
      TraceRecord r;
      r.k = 0;
      r.objective = f0;
      r.merit = prev_merit;
      r.step_norm = prev_outer_step;
      r.residual_norm = quiet_nan();
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
    Vector inner_start = x;
    for (std::size_t i = 0; i < config.inertial_weights.size(); ++i) {
      inner_start += config.inertial_weights[i] * (history[i] - history[i + 1]);
    }

    const double threshold = config.delta * prev_outer_step;
    PicardResult picard =
        picard_solve(problem, anchor, inner_start, threshold, config.max_inner);
    if (!picard.converged) {
      throw ConvergenceError(
          "cdca_solve: inner loop exhausted max_inner at outer iteration " +
              std::to_string(k),
          std::move(picard.final_point), picard.last_step_norm);
    }
    ++iter;
    extra_inner += picard.inner_iterations - 1;

    Vector candidate = std::move(picard.final_point);
    Vector g_sub = std::move(picard.g_subgradient);
    double inner_step = picard.last_step_norm;
    double rel = internal::relative_change(candidate, x);
    bool extra_applied = false;
    bool stop = false;

    // Stop test: a small relative change is only trusted after one more map
    // application; an exactly unchanged iterate is a critical point.
    if (rel < config.tol) {
      const bool first_unchanged = rel == 0.0;
      MapStep refined = apply_map_detailed(problem, anchor, candidate);
      ++extra_inner;
      extra_applied = true;
      inner_step = (refined.point - candidate).norm();
      candidate = std::move(refined.point);
      g_sub = std::move(refined.g_subgradient);
      rel = internal::relative_change(candidate, x);
      if (first_unchanged && rel == 0.0) {
        stop = true;
        reason = TerminationReason::kStationaryDetected;
      } else if (rel < config.tol) {
        stop = true;
        reason = TerminationReason::kToleranceReached;
      }
    }

    const double step = (candidate - x).norm();

    if (monitor) {
      const double objective = evaluate_objective(problem, candidate);
      const double merit = objective + coupling * step * step;
      double residual = quiet_nan();
      if (config.check_invariants) {
        if (std::isfinite(prev_merit) &&
            merit + (0.5 * lambda - coupling) * step * step >
                prev_merit + kMeritSlack) {
          ++trace.merit_violations;
        }
        if (lh) {
          residual = (problem.smooth.gradient(candidate) + g_sub -
                      problem.concave_part.subgradient(candidate))
                         .norm();
          const double bound = (shrink * config.delta / mu) * prev_outer_step +
                               (lambda + *lh) * step + kResidualSlack;
          if (residual > bound) ++trace.residual_bound_violations;
        }
      }
      if (config.record_trace) {
        TraceRecord r;
        r.k = k + 1;
        r.objective = objective;
        r.merit = merit;
        r.inner_count = picard.inner_iterations;
        r.extra_applied = extra_applied;
        r.inner_step_norm = inner_step;
        r.first_inner_step = picard.first_step_norm;
        r.step_norm = step;
        r.rel_change = rel;
        r.residual_norm = residual;
        r.elapsed_seconds = watch.seconds();
        trace.records.push_back(r);
      }
      prev_merit = merit;
    }

    history.pop_back();
    history.push_front(candidate);
    prev_outer_step = step;
    x = std::move(candidate);
    if (stop) break;
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
