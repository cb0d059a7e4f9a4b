#include "dcopt/fixed_point.hpp"

#include <cmath>
#include <utility>

namespace dcopt {

double endpoint_mu(double lambda, double lf) {
  if (!(lambda > 0) || !(lf >= 0)) {
    throw std::invalid_argument("endpoint_mu: need lambda > 0 and lf >= 0");
  }
  return 2.0 / (2.0 * lambda + lf);
}

double contraction_coefficient(double lambda, double mu, double lf) {
  if (!(lambda > 0) || !(lf >= 0) || !(mu > 0) || mu > endpoint_mu(lambda, lf)) {
    throw std::invalid_argument(
        "contraction_coefficient: need 0 < mu <= 2/(2 lambda + lf)");
  }
  return 1.0 - mu * lambda;
}

void check_anchor(const DCProblem& problem, const ContractionAnchor& anchor) {
  contraction_coefficient(anchor.lambda, anchor.mu,
                          problem.smooth.lipschitz_constant);
  if (anchor.anchor_point.size() != problem.dimension ||
      anchor.concave_subgradient.size() != problem.dimension) {
    throw std::invalid_argument("anchor: vector length mismatch with problem");
  }
}

namespace {

// T(x) before the prox; anchor assumed validated by the caller.
inline Vector pre_prox(const DCProblem& problem, const ContractionAnchor& anchor,
                       const Vector& x) {
  const double mu = anchor.mu;
  const double shrink = 1.0 - mu * anchor.lambda;
  return shrink * x - mu * problem.smooth.gradient(x) +
         (mu * anchor.lambda) * anchor.anchor_point +
         mu * anchor.concave_subgradient;
}

}  // namespace

Vector apply_map(const DCProblem& problem, const ContractionAnchor& anchor,
                 const Vector& x) {
  check_anchor(problem, anchor);
  check_dimension(problem, x, "apply_map");
  return problem.prox_friendly.prox(pre_prox(problem, anchor, x), anchor.mu);
}

MapStep apply_map_detailed(const DCProblem& problem,
                           const ContractionAnchor& anchor, const Vector& x) {
  check_anchor(problem, anchor);
  check_dimension(problem, x, "apply_map_detailed");
  Vector u = pre_prox(problem, anchor, x);
  Vector p = problem.prox_friendly.prox(u, anchor.mu);
  Vector xi = (u - p) / anchor.mu;
  return {std::move(p), std::move(xi)};
}

PicardResult picard_solve(const DCProblem& problem,
                          const ContractionAnchor& anchor, const Vector& start,
                          double threshold, int max_inner) {
  check_anchor(problem, anchor);
  check_dimension(problem, start, "picard_solve");
  if (threshold < 0) {
    throw std::invalid_argument("picard_solve: threshold must be nonnegative");
  }
  if (max_inner < 1) {
    throw std::invalid_argument("picard_solve: max_inner must be positive");
  }

  PicardResult result;
  Vector current = start;
  for (int m = 1; m <= max_inner; ++m) {
    Vector u = pre_prox(problem, anchor, current);
    Vector next = problem.prox_friendly.prox(u, anchor.mu);
    const double step = (next - current).norm();
    if (m == 1) result.first_step_norm = step;
    result.inner_iterations = m;
    result.last_step_norm = step;
    result.g_subgradient = (u - next) / anchor.mu;
    current = std::move(next);
    if (step <= threshold) {
      result.converged = true;
      break;
    }
  }
  result.final_point = std::move(current);
  return result;
}

Vector solve_exact(const DCProblem& problem, const ContractionAnchor& anchor,
                   const Vector& start, double tight_tolerance, int max_inner) {
  if (!(tight_tolerance > 0)) {
    throw std::invalid_argument("solve_exact: tight_tolerance must be positive");
  }
  PicardResult result =
      picard_solve(problem, anchor, start, tight_tolerance, max_inner);
  if (!result.converged) {
    throw ConvergenceError(
        "solve_exact: contraction iteration did not reach the requested "
        "accuracy within " + std::to_string(max_inner) + " applications",
        std::move(result.final_point), result.last_step_norm);
  }
  return std::move(result.final_point);
}

}  // namespace dcopt
