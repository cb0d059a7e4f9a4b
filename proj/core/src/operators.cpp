#include "dcopt/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "dcopt/rng.hpp"

namespace dcopt {
namespace {

// Start-vector seed for the power iteration; fixed so that estimated
// constants (and everything derived from them) are reproducible.
constexpr std::uint64_t kPowerSeed = 0x5bd1e995u;

}  // namespace

void validate_least_squares(const LeastSquaresData& data) {
  if (data.matrix.rows() != data.observations.size()) {
    throw std::invalid_argument("least squares: rows of A must match length of b");
  }
  if (data.matrix.rows() == 0 || data.matrix.cols() == 0) {
    throw std::invalid_argument("least squares: A must be nonempty");
  }
  for (Index j = 0; j < data.matrix.cols(); ++j) {
    if (data.matrix.col(j).norm() == 0.0) {
      throw std::invalid_argument("least squares: A has a zero column (column " +
                                  std::to_string(j) + ")");
    }
  }
}

void validate_regularizer(const RegularizerSpec& spec) {
  if (!(spec.gamma > 0)) {
    throw std::invalid_argument("regularizer: gamma must be positive");
  }
  if (spec.kind == RegularizerKind::kLogarithmic && !(spec.epsilon > 0)) {
    throw std::invalid_argument("regularizer: epsilon must be positive");
  }
}

Vector least_squares_gradient(const LeastSquaresData& data, const Vector& x) {
  if (x.size() != data.matrix.cols()) {
    throw std::invalid_argument("least_squares_gradient: x length mismatch");
  }
  return data.matrix.transpose() * (data.matrix * x - data.observations);
}

LipschitzEstimate dominant_eigenvalue(
    Index dim, const std::function<Vector(const Vector&)>& apply,
    double tolerance, int max_iters) {
  if (!(tolerance > 0) || max_iters < 1 || dim < 1) {
    throw std::invalid_argument("dominant_eigenvalue: bad arguments");
  }
  RandomStream stream(kPowerSeed);
  Vector v = stream.gaussian_vector(dim);
  v.normalize();

  LipschitzEstimate estimate;
  for (int it = 1; it <= max_iters; ++it) {
    Vector w = apply(v);
    const double theta = v.dot(w);  // Rayleigh quotient, ||v|| == 1
    estimate.value = theta;
    estimate.iterations = it;
    const double w_norm = w.norm();
    if (w_norm == 0.0) break;  // v annihilated; no dominant direction
    // For symmetric operators the Rayleigh quotient is within the residual
    // norm of some eigenvalue; power iteration homes in on the largest.
    if ((w - theta * v).norm() <= tolerance * std::max(theta, 1e-300)) {
      estimate.converged = true;
      break;
    }
    v = w / w_norm;
  }
  return estimate;
}

LipschitzEstimate estimate_lipschitz(const LeastSquaresData& data,
                                     double tolerance, int max_iters) {
  const Matrix& a = data.matrix;
  return dominant_eigenvalue(
      a.cols(),
      [&a](const Vector& v) { return Vector(a.transpose() * (a * v)); },
      tolerance, max_iters);
}

Vector soft_threshold_prox(const Vector& x, double threshold) {
  if (threshold < 0) {
    throw std::invalid_argument("soft_threshold_prox: threshold must be nonnegative");
  }
  Vector out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double magnitude = std::abs(x[i]) - threshold;
    out[i] = magnitude > 0 ? (x[i] > 0 ? magnitude : -magnitude) : 0.0;
  }
  return out;
}

Vector l1_minus_l2_h_subgradient(const Vector& x, double gamma) {
  if (!(gamma > 0)) {
    throw std::invalid_argument("l1_minus_l2_h_subgradient: gamma must be positive");
  }
  const double norm = x.norm();
  if (norm == 0.0) return Vector::Zero(x.size());
  return (gamma / norm) * x;
}

std::pair<ProxFriendlyTerm, ConvexTerm> l1_minus_l2_split(const RegularizerSpec& spec) {
  if (spec.kind != RegularizerKind::kL1MinusL2) {
    throw std::invalid_argument("l1_minus_l2_split: wrong regularizer kind");
  }
  validate_regularizer(spec);
  const double gamma = spec.gamma;

  ProxFriendlyTerm g;
  g.value = [gamma](const Vector& x) { return gamma * x.lpNorm<1>(); };
  g.prox = [gamma](const Vector& x, double alpha) {
    return soft_threshold_prox(x, alpha * gamma);
  };

  ConvexTerm h;
  h.value = [gamma](const Vector& x) { return gamma * x.norm(); };
  h.subgradient = [gamma](const Vector& x) {
    return l1_minus_l2_h_subgradient(x, gamma);
  };
  return {std::move(g), std::move(h)};
}

std::pair<ProxFriendlyTerm, ConvexTerm> logarithmic_split(const RegularizerSpec& spec) {
  if (spec.kind != RegularizerKind::kLogarithmic) {
    throw std::invalid_argument("logarithmic_split: wrong regularizer kind");
  }
  validate_regularizer(spec);
  const double gamma = spec.gamma;
  const double eps = spec.epsilon;
  const double scale = gamma / eps;

  ProxFriendlyTerm g;
  g.value = [scale](const Vector& x) { return scale * x.lpNorm<1>(); };
  g.prox = [scale](const Vector& x, double alpha) {
    return soft_threshold_prox(x, alpha * scale);
  };

  ConvexTerm h;
  h.value = [gamma, eps](const Vector& x) {
    double sum = 0.0;
    for (Index i = 0; i < x.size(); ++i) {
      const double a = std::abs(x[i]);
      sum += a / eps - std::log(a + eps) + std::log(eps);
    }
    return gamma * sum;
  };
  h.subgradient = [gamma, eps](const Vector& x) {
    Vector grad(x.size());
    for (Index i = 0; i < x.size(); ++i) {
      const double a = std::abs(x[i]);
      const double slope = gamma * (1.0 / eps - 1.0 / (a + eps));  // 0 at x_i = 0
      grad[i] = x[i] > 0 ? slope : (x[i] < 0 ? -slope : 0.0);
    }
    return grad;
  };
  h.gradient_lipschitz = gamma / (eps * eps);
  return {std::move(g), std::move(h)};
}

SmoothTerm least_squares_smooth(std::shared_ptr<const LeastSquaresData> data,
                                double lipschitz) {
  if (!data) throw std::invalid_argument("least_squares_smooth: null data");
  if (!(lipschitz >= 0)) {
    throw std::invalid_argument("least_squares_smooth: negative Lipschitz constant");
  }
  SmoothTerm f;
  f.value = [data](const Vector& x) {
    return 0.5 * (data->matrix * x - data->observations).squaredNorm();
  };
  f.gradient = [data](const Vector& x) { return least_squares_gradient(*data, x); };
  f.lipschitz_constant = lipschitz;
  return f;
}

DCProblem make_least_squares_problem(LeastSquaresData data,
                                     const RegularizerSpec& spec,
                                     double lipschitz) {
  validate_least_squares(data);
  auto shared = std::make_shared<const LeastSquaresData>(std::move(data));

  DCProblem problem;
  problem.dimension = shared->matrix.cols();
  problem.smooth = least_squares_smooth(shared, lipschitz);
  auto [g, h] = spec.kind == RegularizerKind::kL1MinusL2 ? l1_minus_l2_split(spec)
                                                         : logarithmic_split(spec);
  problem.prox_friendly = std::move(g);
  problem.concave_part = std::move(h);
  return problem;
}

}  // namespace dcopt
