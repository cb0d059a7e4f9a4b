#pragma once

#include <memory>
#include <utility>

#include "dcopt/problem.hpp"

namespace dcopt {

/// Dense data of the least-squares loss f(x) = 1/2 ||Ax - b||^2.
struct LeastSquaresData {
  Matrix matrix;        // A, m x n
  Vector observations;  // b, length m
};

/// Throws std::invalid_argument on dimension mismatch or a zero column of A.
void validate_least_squares(const LeastSquaresData& data);

enum class RegularizerKind {
  kL1MinusL2,    // gamma (||x||_1 - ||x||)
  kLogarithmic,  // sum_i gamma (log(|x_i| + eps) - log eps)
};

struct RegularizerSpec {
  RegularizerKind kind = RegularizerKind::kL1MinusL2;
  double gamma = 0.01;
  double epsilon = 0.5;  // used only by kLogarithmic
};

void validate_regularizer(const RegularizerSpec& spec);

/// Gradient of 1/2 ||Ax - b||^2, namely A^T (Ax - b).
Vector least_squares_gradient(const LeastSquaresData& data, const Vector& x);

struct LipschitzEstimate {
  double value = 0.0;  // lambda_max(A^T A)
  bool converged = false;
  int iterations = 0;
};

/// Power iteration for the top eigenvalue of a symmetric positive
/// semidefinite operator given by its matrix-vector product. Deterministic
/// seeded start vector. Converged means the eigenpair residual dropped below
/// tolerance relative to the current estimate; otherwise the best estimate so
/// far is returned with converged = false.
LipschitzEstimate dominant_eigenvalue(
    Index dim, const std::function<Vector(const Vector&)>& apply,
    double tolerance = 1e-9, int max_iters = 10000);

/// lambda_max(A^T A) of the instance matrix, matrix-free.
LipschitzEstimate estimate_lipschitz(const LeastSquaresData& data,
                                     double tolerance = 1e-9,
                                     int max_iters = 10000);

/// Componentwise sign(x_i) max(|x_i| - threshold, 0): the prox of
/// threshold * ||.||_1 with unit step.
Vector soft_threshold_prox(const Vector& x, double threshold);

/// Minimal-norm subgradient of gamma ||.||: gamma x / ||x||, zero at the
/// origin. The zero choice keeps the solvers deterministic at kinks.
Vector l1_minus_l2_h_subgradient(const Vector& x, double gamma);

/// g = gamma ||.||_1 and h = gamma ||.||. Requires kind == kL1MinusL2.
std::pair<ProxFriendlyTerm, ConvexTerm> l1_minus_l2_split(const RegularizerSpec& spec);

/// g = (gamma/eps) ||.||_1 and the smooth remainder h with
/// grad h_i = gamma sign(x_i) (1/eps - 1/(|x_i| + eps)), L_h = gamma/eps^2.
/// Requires kind == kLogarithmic.
std::pair<ProxFriendlyTerm, ConvexTerm> logarithmic_split(const RegularizerSpec& spec);

/// f = 1/2 ||Ax - b||^2 with the supplied Lipschitz constant; shares `data`.
SmoothTerm least_squares_smooth(std::shared_ptr<const LeastSquaresData> data,
                                double lipschitz);

/// Assembles the full DC problem for one of the two regularizer families.
/// `lipschitz` is lambda_max(A^T A), e.g. from estimate_lipschitz.
DCProblem make_least_squares_problem(LeastSquaresData data,
                                     const RegularizerSpec& spec,
                                     double lipschitz);

}  // namespace dcopt
