#pragma once

#include <cstdint>
#include <vector>

#include "dcopt/operators.hpp"
#include "dcopt/rng.hpp"

namespace dcopt {

/// Recipe for one random sparse least-squares instance.
struct InstanceSpec {
  int rows = 0;       // m
  int cols = 0;       // n
  int sparsity = 0;   // K <= n; m <= n is the usual regime
  double noise_scale = 0.001;
  std::uint64_t seed = 0;
  RegularizerSpec regularizer;
};

/// Generated data: A has i.i.d. standard Gaussian entries with columns
/// rescaled to unit norm, the ground truth is K-sparse Gaussian on a uniform
/// random support, and b = A x* + noise_scale * noise.
struct Instance {
  LeastSquaresData data;
  Vector ground_truth;       // x*, zero off support
  std::vector<int> support;  // ascending, size K
  Vector column_norms;       // Euclidean norms of the raw design columns,
                             // recorded before they were rescaled to 1
};

/// Deterministic in spec.seed; each random component (matrix, support,
/// ground truth, noise) consumes its own derive_stream_seed sub-stream, so
/// components can be reproduced independently.
Instance generate_instance(const InstanceSpec& spec);

/// Solver starting point x0 uniform in (0,1)^n, drawn from the kStart
/// sub-stream of the same seed; shared by every solver run on the instance.
Vector starting_point(const InstanceSpec& spec);

/// lambda_max of the raw Gaussian design G = A diag(column_norms), i.e. the
/// Lipschitz constant the design had before column normalization. The sweep
/// harness uses this as its default parameter scale (see SweepOptions); it is
/// a large upper bound of the instance constant, roughly m times it.
LipschitzEstimate raw_design_lipschitz(const Instance& instance,
                                       double tolerance = 1e-9,
                                       int max_iters = 10000);

}  // namespace dcopt
