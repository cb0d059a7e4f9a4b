#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dcopt/instance.hpp"
#include "dcopt/solvers.hpp"

namespace dcopt {

enum class SolverKind { kCdca, kLpm, kPdca, kPdcaE, kAdca };

std::string to_string(SolverKind kind);
std::optional<SolverKind> parse_solver(const std::string& name);

/// Per-cell solver knobs, expressed relative to the instance: lambda and rho
/// scale with L_f, delta with lambda/L_f. Desk defaults mirror the usual
/// sparse least-squares setup.
struct CellConfig {
  SolverKind solver = SolverKind::kCdca;
  double lambda_multiple = 0.1;  // lambda = multiple * L_f
  double delta_factor = 1.99;    // delta = factor * lambda / L_f
  double tol = 1e-5;
  int adca_q = 5;
  double adca_rho_factor = 1.1;  // rho = factor * L_f
  long max_outer = 100000;
  int max_inner = 10000;
};

/// Builds the SolverConfig for one cell given the instance Lipschitz constant.
SolverConfig cell_solver_config(const CellConfig& cell, double lipschitz);

/// Runs one solver of the suite on a problem; q and rho are consumed by the
/// accelerated variant only.
SolveResult run_solver(SolverKind kind, const DCProblem& problem,
                       const Vector& x0, const SolverConfig& config, int q,
                       double rho);

struct TrialResult {
  RunSummary summary;
  bool failed = false;     // solver threw; excluded from means
  bool hit_cap = false;    // tIter reached the cap; excluded from means
  std::string error;
};

/// One (solver, size, lambda) cell with its per-trial results and means over
/// the contributing (non-capped, non-failed) trials.
struct ReportRow {
  SolverKind solver = SolverKind::kCdca;
  int rows = 0, cols = 0, sparsity = 0;
  double lambda_multiple = 0.0;
  double tol = 0.0;
  int contributing_trials = 0;
  double mean_iter = 0.0;
  double mean_init = 0.0;
  double mean_titer = 0.0;
  double mean_fval = 0.0;
  double mean_seconds = 0.0;
  bool max_flag = false;  // some trial hit the cap
  std::vector<TrialResult> trials;
};

struct BenchmarkReport {
  std::vector<ReportRow> rows;  // ordered (size, cell); trials by index
};

/// Which Lipschitz constant parameterizes lambda, mu, delta and rho.
/// kRawDesign (the benchmark convention) derives them from the design matrix
/// before column normalization, a conservative upper bound roughly m times
/// the instance constant; kInstance uses the instance matrix itself.
enum class ParamScale { kRawDesign, kInstance };

struct SweepOptions {
  int trials = 30;
  long titer_cap = 100000;
  std::uint64_t base_seed = 1;
  int jobs = 1;
  bool check_invariants = false;  // timing runs keep monitors off
  ParamScale param_scale = ParamScale::kRawDesign;
};

/// Runs every size x cell x trial. Trial t of any cell reuses instance seed
/// base_seed + t, so starting points are paired across solvers. Trials may
/// execute concurrently (jobs > 1); every result lands in a preassigned slot,
/// making the report independent of scheduling.
BenchmarkReport run_sweep(const std::vector<InstanceSpec>& sizes,
                          const std::vector<CellConfig>& cells,
                          const SweepOptions& options);

/// CSV schema: solver,m,n,K,lambda_multiple,tol,trials,mean_iter,mean_init,
/// mean_titer,mean_fval,mean_seconds,max_flag. Doubles are printed in
/// shortest round-trip form; only the seconds column varies between runs.
void emit_report_csv(const BenchmarkReport& report, std::ostream& out);

/// Same schema as the CSV plus a per-trial array per row.
void emit_report_json(const BenchmarkReport& report, std::ostream& out);

enum class ReportFormat { kCsv, kJson };

/// Writes the fully rendered report to `path` in one shot; throws
/// std::runtime_error naming the path when the target cannot be written.
void emit_report(const BenchmarkReport& report, ReportFormat format,
                 const std::string& path);

}  // namespace dcopt
