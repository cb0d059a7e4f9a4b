#include "solver_common.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dcopt {

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kToleranceReached:
      return "tolerance";
    case TerminationReason::kMaxOuter:
      return "max_outer";
    case TerminationReason::kStationaryDetected:
      return "stationary";
  }
  return "unknown";
}

double tau(double lambda, double mu, double delta) {
  if (!(lambda > 0) || !(mu > 0) || !(delta > 0)) {
    throw std::invalid_argument("tau: lambda, mu, delta must be positive");
  }
  const double shrink = 1.0 - mu * lambda;
  return shrink * shrink * delta * delta / (2.0 * lambda * mu * mu);
}

void write_trace(std::ostream& out, const SolverTrace& trace) {
  out << "k,F,E,m_k,rel_change,elapsed_seconds\n";
  for (const TraceRecord& r : trace.records) {
    out << r.k << ',' << internal::format_double(r.objective) << ','
        << internal::format_double(r.merit) << ',' << r.inner_count << ','
        << internal::format_double(r.rel_change) << ','
        << internal::format_double(r.elapsed_seconds) << '\n';
  }
}

namespace internal {

double resolve_mu(const SolverConfig& config, double lf) {
  const double top = endpoint_mu(config.lambda, lf);
  const double mu = config.mu == 0.0 ? top : config.mu;
  if (!(mu > 0) || mu > top) {
    throw std::invalid_argument("config: mu must lie in (0, 2/(2 lambda + L_f)]");
  }
  return mu;
}

void check_outer(const DCProblem& problem, const Vector& x0,
                 const SolverConfig& config) {
  check_dimension(problem, x0, "solver start");
  if (!x0.allFinite()) {
    throw std::invalid_argument("solver start: x0 must be finite");
  }
  if (!(config.tol > 0)) {
    throw std::invalid_argument("config: tol must be positive");
  }
  if (config.max_outer < 1 || config.max_inner < 1 || config.max_total < 0) {
    throw std::invalid_argument("config: iteration budgets must be positive");
  }
}

double tau_or_zero(const SolverConfig& config, double lf) {
  if (!(config.lambda > 0) || !(config.delta > 0)) return 0.0;
  if (lf > 0 && !(config.delta < 2.0 * config.lambda / lf)) return 0.0;
  const double top = endpoint_mu(config.lambda, lf);
  const double mu = config.mu == 0.0 ? top : config.mu;
  if (!(mu > 0) || mu > top) return 0.0;
  return tau(config.lambda, mu, config.delta);
}

std::string format_double(double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

}  // namespace internal
}  // namespace dcopt
