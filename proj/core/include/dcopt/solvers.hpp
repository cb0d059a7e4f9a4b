#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dcopt/fixed_point.hpp"

namespace dcopt {

enum class TerminationReason {
  kToleranceReached,    // relative change fell below tol
  kMaxOuter,            // outer-iteration or total-iteration budget exhausted
  kStationaryDetected,  // exact fixed point of the frozen map reached
};

std::string to_string(TerminationReason reason);

struct SolverConfig {
  double lambda = 1.0;  // proximal weight of the subproblem
  double delta = 0.5;   // inner termination factor, in (0, 2 lambda / L_f)
  double mu = 0.0;      // prox step; 0 selects the endpoint 2/(2 lambda + L_f)
  double tol = 1e-5;    // outer relative-change tolerance

  // Inner-loop warm-start weights {a_i}: x_0 = x^k + sum_i a_i (x^{k-i} - x^{k-i-1}).
  std::vector<double> inertial_weights{0.6, 0.6};

  long max_outer = 100000;
  int max_inner = 10000;
  long max_total = 0;  // cap on Iter + InIt; 0 means unbounded

  // Monitors cost roughly one objective evaluation per outer iteration;
  // timing-sensitive runs switch both off.
  bool check_invariants = true;
  bool record_trace = true;

  // Extrapolated proximal stepping only: restart controls.
  bool adaptive_restart = true;
  int fixed_restart_period = 200;  // 0 disables; 1 forces beta == 0 throughout
};

/// Weight of the coupling term in the merit function
/// E(x, y) = F(x) + tau ||x - y||^2: tau = (1 - mu lambda)^2 delta^2 / (2 lambda mu^2).
/// At the endpoint mu this equals L_f^2 delta^2 / (8 lambda) and stays below
/// lambda/2 for admissible delta.
double tau(double lambda, double mu, double delta);

struct TraceRecord {
  long k = 0;                    // outer index of the accepted iterate
  double objective = 0.0;        // F(x^k)
  double merit = 0.0;            // E(x^k, x^{k-1})
  int inner_count = 0;           // m_k: map applications before the stop test
  bool extra_applied = false;    // one more application made by the stop test
  double inner_step_norm = 0.0;  // last inner step norm
  double first_inner_step = 0.0; // ||x_1 - x_0|| of the inner loop
  double step_norm = 0.0;        // ||x^k - x^{k-1}||
  double rel_change = 0.0;       // step_norm / max(1, ||x^{k-1}||)
  double residual_norm = 0.0;    // ||grad f + xi - grad h|| at x^k (smooth h), else NaN
  double elapsed_seconds = 0.0;  // cumulative wall clock inside the solver
};

struct SolverTrace {
  std::vector<TraceRecord> records;  // row 0 describes the starting point
  TerminationReason reason = TerminationReason::kMaxOuter;

  // Monitor counters, populated when check_invariants is on.
  int merit_violations = 0;           // failures of the E-descent inequality
  int residual_bound_violations = 0;  // failures of the subgradient norm bound
};

struct RunSummary {
  long outer_iterations = 0;        // Iter
  long extra_inner_iterations = 0;  // InIt = sum_k (m_k - 1) + stop-test applications
  long total_iterations = 0;        // tIter = Iter + InIt
  double final_objective = 0.0;     // fval
  double wall_seconds = 0.0;
  TerminationReason reason = TerminationReason::kMaxOuter;
  bool converged = false;
};

struct SolveResult {
  Vector x;
  SolverTrace trace;
  RunSummary summary;
};

/// Outer proximal linearization whose subproblem is solved inexactly by the
/// contraction iteration, stopped when the inner step norm drops below
/// delta * ||x^{k-1} - x^k||. The stop test applies one further map step when
/// the relative change looks small and terminates on the refined iterate.
SolveResult cdca_solve(const DCProblem& problem, const Vector& x0,
                       const SolverConfig& config);

/// Same outer scheme with each subproblem solved to near machine precision.
SolveResult lpm_solve(const DCProblem& problem, const Vector& x0,
                      const SolverConfig& config);

/// Proximal-gradient step on f - <eta, .> with step 1/L_f.
SolveResult pdca_solve(const DCProblem& problem, const Vector& x0,
                       const SolverConfig& config);

/// pdca_solve with Nesterov extrapolation; the momentum follows the
/// theta-recursion theta_{k} = (1 + sqrt(1 + 4 theta_{k-1}^2))/2,
/// beta_k = (theta_{k-1} - 1)/theta_k, reset by the restarts in SolverConfig.
SolveResult pdca_e_solve(const DCProblem& problem, const Vector& x0,
                         const SolverConfig& config);

/// Extrapolated step accepted only while the objective stays below the max of
/// the last q+1 values; requires rho > L_f.
SolveResult adca_solve(const DCProblem& problem, const Vector& x0,
                       const SolverConfig& config, int q, double rho);

/// Line-delimited export, one row per record:
/// k,F,E,m_k,rel_change,elapsed_seconds.
void write_trace(std::ostream& out, const SolverTrace& trace);

}  // namespace dcopt
