#include "dcopt/instance.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dcopt {
namespace {

void validate_spec(const InstanceSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) {
    throw std::invalid_argument("instance: rows and cols must be positive");
  }
  if (spec.sparsity < 1 || spec.sparsity > spec.cols) {
    throw std::invalid_argument("instance: need 1 <= K <= n");
  }
  if (!(spec.noise_scale >= 0)) {
    throw std::invalid_argument("instance: noise_scale must be nonnegative");
  }
  validate_regularizer(spec.regularizer);
}

}  // namespace

Instance generate_instance(const InstanceSpec& spec) {
  validate_spec(spec);
  const int m = spec.rows;
  const int n = spec.cols;
  const int k = spec.sparsity;

  // Gaussian design, filled column by column, then unit-norm columns; the
  // original norms are kept so the raw design can be reconstituted.
  RandomStream matrix_stream(derive_stream_seed(spec.seed, StreamTag::kMatrix));
  Matrix a(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) a(i, j) = matrix_stream.gaussian();
  }
  Vector norms(n);
  for (int j = 0; j < n; ++j) {
    const double norm = a.col(j).norm();
    if (norm == 0.0) {
      throw std::runtime_error("instance: drew a zero column, re-seed");
    }
    norms[j] = norm;
    a.col(j) /= norm;
  }

  // Support: partial Fisher-Yates over 0..n-1, reported ascending.
  RandomStream support_stream(derive_stream_seed(spec.seed, StreamTag::kSupport));
  std::vector<int> indices(n);
  std::iota(indices.begin(), indices.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(support_stream.below(
                           static_cast<std::uint64_t>(n - i)));
    std::swap(indices[i], indices[j]);
  }
  std::vector<int> support(indices.begin(), indices.begin() + k);
  std::sort(support.begin(), support.end());

  // Ground truth on the sorted support, in index order.
  RandomStream truth_stream(derive_stream_seed(spec.seed, StreamTag::kGroundTruth));
  Vector truth = Vector::Zero(n);
  for (int idx : support) truth[idx] = truth_stream.gaussian();

  RandomStream noise_stream(derive_stream_seed(spec.seed, StreamTag::kNoise));
  Vector b = a * truth;
  if (spec.noise_scale > 0) {
    for (int i = 0; i < m; ++i) b[i] += spec.noise_scale * noise_stream.gaussian();
  }

  Instance instance;
  instance.data = LeastSquaresData{std::move(a), std::move(b)};
  instance.ground_truth = std::move(truth);
  instance.support = std::move(support);
  instance.column_norms = std::move(norms);
  return instance;
}

LipschitzEstimate raw_design_lipschitz(const Instance& instance,
                                       double tolerance, int max_iters) {
  const Matrix& a = instance.data.matrix;
  const Vector& d = instance.column_norms;
  if (d.size() != a.cols()) {
    throw std::invalid_argument("raw_design_lipschitz: missing column norms");
  }
  // G^T G v with G = A diag(d), applied without materializing G.
  auto apply = [&a, &d](const Vector& v) {
    return Vector(d.asDiagonal() * (a.transpose() * (a * (d.asDiagonal() * v))));
  };
  return dominant_eigenvalue(a.cols(), apply, tolerance, max_iters);
}

Vector starting_point(const InstanceSpec& spec) {
  validate_spec(spec);
  RandomStream stream(derive_stream_seed(spec.seed, StreamTag::kStart));
  return stream.uniform01_vector(spec.cols);
}

}  // namespace dcopt
