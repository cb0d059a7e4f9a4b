#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "dcopt/solvers.hpp"
#include "solver_common.hpp"

namespace dcopt {

SolveResult adca_solve(const DCProblem& problem, const Vector& x0,
                       const SolverConfig& config, int q, double rho) {
  internal::check_outer(problem, x0, config);
  const double lf = problem.smooth.lipschitz_constant;
  if (q < 0) throw std::invalid_argument("adca_solve: q must be nonnegative");
  if (!(rho > lf)) throw std::invalid_argument("adca_solve: rho must exceed L_f");
  const double coupling = internal::tau_or_zero(config, lf);
  const std::size_t window = static_cast<std::size_t>(q) + 1;

  SolveResult result;
  SolverTrace& trace = result.trace;
  internal::Stopwatch watch;

  // The acceptance test consumes objective values, so they are computed
  // every iteration regardless of the monitors.
  double objective = evaluate_objective(problem, x0);
  std::deque<double> recent{objective};

  if (config.record_trace) {
    TraceRecord r;
    r.k = 0;
    r.objective = objective;
    r.merit = objective;
    r.residual_norm = std::numeric_limits<double>::quiet_NaN();
    r.elapsed_seconds = watch.seconds();
    trace.records.push_back(r);
  }

  Vector x = x0;
  Vector x_prev = x0;
  double theta_prev = 1.0;
  double theta = 1.0;
  long iter = 0;
  TerminationReason reason = TerminationReason::kMaxOuter;

  for (long k = 0; k < config.max_outer; ++k) {
    if (config.max_total > 0 && iter >= config.max_total) break;

    Vector z = x;
    if (k > 0) {
      const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      theta_prev = theta;
      theta = theta_next;
      const double beta = (theta_prev - 1.0) / theta;
      z += beta * (x - x_prev);
    }

    // The extrapolated point is kept only while it does not exceed the worst
    // of the last q+1 objective values; this tolerates controlled increases.
    const double worst = *std::max_element(recent.begin(), recent.end());
    const Vector& v = evaluate_objective(problem, z) <= worst ? z : x;

    const Vector eta = problem.concave_part.subgradient(v);
    const Vector y = rho * v - problem.smooth.gradient(v) + eta;
    Vector candidate = problem.prox_friendly.prox(y / rho, 1.0 / rho);
    ++iter;

    const double step = (candidate - x).norm();
    const double rel = internal::relative_change(candidate, x);

    objective = evaluate_objective(problem, candidate);
    recent.push_back(objective);
    if (recent.size() > window) recent.pop_front();

    if (config.record_trace) {
      TraceRecord r;
      r.k = k + 1;
      r.objective = objective;
      r.merit = objective + coupling * step * step;
      r.inner_count = 1;
      r.inner_step_norm = step;
      r.first_inner_step = step;
      r.step_norm = step;
      r.rel_change = rel;
      r.residual_norm = std::numeric_limits<double>::quiet_NaN();
      r.elapsed_seconds = watch.seconds();
      trace.records.push_back(r);
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
  result.summary.final_objective = objective;
  result.x = std::move(x);
  return result;
}

}  // namespace dcopt
