#pragma once

#include <chrono>
#include <string>

#include "dcopt/solvers.hpp"

// Helpers shared by the solver translation units; not installed.

namespace dcopt::internal {

class Stopwatch {
 public:
  Stopwatch() : start_(Clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_;
};

inline double relative_change(const Vector& x_new, const Vector& x_old) {
  return (x_new - x_old).norm() / std::max(1.0, x_old.norm());
}

/// Resolves mu = 0 to the endpoint 2/(2 lambda + lf) and validates the range.
double resolve_mu(const SolverConfig& config, double lf);

/// Shared outer-loop preconditions: finite start of the right size, tol > 0,
/// positive iteration budgets.
void check_outer(const DCProblem& problem, const Vector& x0,
                 const SolverConfig& config);

/// tau from the config when its contraction fields are admissible for lf,
/// otherwise 0. Solvers that do not own lambda/delta/mu use this for the
/// merit column so traces keep a uniform schema.
double tau_or_zero(const SolverConfig& config, double lf);

/// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double value);

}  // namespace dcopt::internal
