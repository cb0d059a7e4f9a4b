#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

#include "dcopt/types.hpp"

namespace dcopt {

/// Smooth convex term f with an L-Lipschitz gradient.
struct SmoothTerm {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double lipschitz_constant = 0.0;  // L_f >= 0
};

/// Proper convex lsc term g with a cheap proximal mapping.
///
/// value may return +infinity outside dom(g). prox(x, alpha) minimizes
/// g(y) + ||y - x||^2 / (2 alpha), so its output always lies in dom(g) and
/// (x - prox(x, alpha)) / alpha is a subgradient of g at the output.
struct ProxFriendlyTerm {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&, double)> prox;
};

/// Finite-valued convex term h, subtracted from f + g.
///
/// gradient_lipschitz is set only when h is continuously differentiable with
/// a Lipschitz gradient; subgradient(x) then returns that gradient.
struct ConvexTerm {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> subgradient;
  std::optional<double> gradient_lipschitz;  // L_h
};

/// Objective F = f + g - h on R^n.
///
/// Immutable once built. Oracles must be pure functions of their inputs so a
/// problem can be shared across concurrent solver runs. Level-boundedness of
/// F is assumed, not checked; it cannot be decided from oracles.
struct DCProblem {
  SmoothTerm smooth;
  ProxFriendlyTerm prox_friendly;
  ConvexTerm concave_part;
  Index dimension = 0;
};

/// Throws std::invalid_argument unless x has the problem dimension.
void check_dimension(const DCProblem& problem, const Vector& x, const char* what);

/// F(x) = f(x) + g(x) - h(x); +infinity when x lies outside dom(g).
double evaluate_objective(const DCProblem& problem, const Vector& x);

/// ||grad f(x) + xi - eta|| for caller-supplied xi in dg(x) and eta in dh(x)
/// (xi is typically harvested from a prox optimality residual). A value near
/// zero certifies an approximate critical point of F.
double criticality_residual(const DCProblem& problem, const Vector& x,
                            const Vector& eta, const Vector& xi);

/// g == 0: the prox is the identity.
ProxFriendlyTerm zero_prox_term();

/// h == 0, with zero gradient and L_h = 0.
ConvexTerm zero_convex_term();

}  // namespace dcopt
