#pragma once

#include <string>

#include "dcopt/problem.hpp"

namespace dcopt {

/// Data frozen at one outer iterate. The affine-plus-gradient map
///
///   T(x) = (1 - mu lambda) x - mu grad f(x) + mu lambda anchor + mu eta
///
/// composed with Prox_{mu g} is a contraction with coefficient 1 - mu lambda
/// whenever 0 < mu <= 2/(2 lambda + L_f); its unique fixed point is the
/// minimizer of f + g - <eta, .> + (lambda/2) ||. - anchor||^2.
struct ContractionAnchor {
  Vector anchor_point;         // x^k
  Vector concave_subgradient;  // eta^k in dh(x^k)
  double lambda = 0.0;
  double mu = 0.0;
};

/// Throws std::invalid_argument unless lambda > 0, mu lies in
/// (0, 2/(2 lambda + L_f)] and the anchor vectors match the problem dimension.
void check_anchor(const DCProblem& problem, const ContractionAnchor& anchor);

/// The contraction coefficient 1 - mu lambda. At the endpoint
/// mu = 2/(2 lambda + lf) it reaches its minimum lf/(2 lambda + lf).
double contraction_coefficient(double lambda, double mu, double lf);

/// Largest admissible step 2/(2 lambda + lf).
double endpoint_mu(double lambda, double lf);

/// One application of Prox_{mu g} after T.
Vector apply_map(const DCProblem& problem, const ContractionAnchor& anchor,
                 const Vector& x);

/// apply_map plus the subgradient of g at the output, harvested from the
/// prox optimality residual (pre_prox - point) / mu.
struct MapStep {
  Vector point;
  Vector g_subgradient;
};
MapStep apply_map_detailed(const DCProblem& problem,
                           const ContractionAnchor& anchor, const Vector& x);

struct PicardResult {
  Vector final_point;           // x_m
  Vector g_subgradient;         // element of dg(final_point)
  int inner_iterations = 0;     // m: number of map applications
  double last_step_norm = 0.0;  // ||x_m - x_{m-1}||
  double first_step_norm = 0.0; // ||x_1 - x_0||
  bool converged = false;
};

/// Iterates x_m = (Prox_{mu g} o T)(x_{m-1}) from x_0 = start, stopping at
/// the first m with ||x_m - x_{m-1}|| <= threshold. Runs at least one
/// application. Exhausting max_inner yields converged = false with the last
/// iterate; the caller decides policy.
PicardResult picard_solve(const DCProblem& problem,
                          const ContractionAnchor& anchor, const Vector& start,
                          double threshold, int max_inner);

/// Thrown when an iteration fails to reach its target accuracy. Carries the
/// best iterate and the residual it achieved.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Vector best_iterate, double residual)
      : std::runtime_error(what),
        best_iterate_(std::move(best_iterate)),
        residual_(residual) {}

  const Vector& best_iterate() const { return best_iterate_; }
  double residual() const { return residual_; }

 private:
  Vector best_iterate_;
  double residual_;
};

/// Near-exact fixed point of the frozen map, i.e. the unique minimizer of
/// f(x) + g(x) - <eta, x> + (lambda/2) ||x - anchor||^2. Throws
/// ConvergenceError if max_inner applications do not reach tight_tolerance.
Vector solve_exact(const DCProblem& problem, const ContractionAnchor& anchor,
                   const Vector& start, double tight_tolerance = 1e-12,
                   int max_inner = 200000);

}  // namespace dcopt
