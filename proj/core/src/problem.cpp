#include "dcopt/problem.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace dcopt {

void check_dimension(const DCProblem& problem, const Vector& x, const char* what) {
  if (x.size() != problem.dimension) {
    throw std::invalid_argument(std::string(what) + ": expected a vector of length " +
                                std::to_string(problem.dimension) + ", got " +
                                std::to_string(x.size()));
  }
}

double evaluate_objective(const DCProblem& problem, const Vector& x) {
  check_dimension(problem, x, "evaluate_objective");
  const double g = problem.prox_friendly.value(x);
  if (std::isinf(g) && g > 0) return std::numeric_limits<double>::infinity();
  return problem.smooth.value(x) + g - problem.concave_part.value(x);
}

double criticality_residual(const DCProblem& problem, const Vector& x,
                            const Vector& eta, const Vector& xi) {
  check_dimension(problem, x, "criticality_residual");
  if (eta.size() != x.size() || xi.size() != x.size()) {
    throw std::invalid_argument("criticality_residual: subgradient length mismatch");
  }
  return (problem.smooth.gradient(x) + xi - eta).norm();
}

ProxFriendlyTerm zero_prox_term() {
  ProxFriendlyTerm term;
  term.value = [](const Vector&) { return 0.0; };
  term.prox = [](const Vector& x, double) { return x; };
  return term;
}

ConvexTerm zero_convex_term() {
  ConvexTerm term;
  term.value = [](const Vector&) { return 0.0; };
  term.subgradient = [](const Vector& x) { return Vector(Vector::Zero(x.size())); };
  term.gradient_lipschitz = 0.0;
  return term;
}

}  // namespace dcopt
