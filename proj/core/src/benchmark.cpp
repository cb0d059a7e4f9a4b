#include "dcopt/benchmark.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "solver_common.hpp"

namespace dcopt {
namespace {

// Accuracy of the per-instance lambda_max(A^T A) estimate; loose enough to be
// cheap, tight enough that derived step sizes are effectively exact.
constexpr double kPowerTolerance = 1e-9;
constexpr int kPowerMaxIters = 100000;

struct Task {
  std::size_t row;
  std::size_t size_index;
  int trial;
};

}  // namespace

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kCdca: return "cdca";
    case SolverKind::kLpm: return "lpm";
    case SolverKind::kPdca: return "pdca";
    case SolverKind::kPdcaE: return "pdcae";
    case SolverKind::kAdca: return "adca";
  }
  return "unknown";
}

std::optional<SolverKind> parse_solver(const std::string& name) {
  if (name == "cdca") return SolverKind::kCdca;
  if (name == "lpm") return SolverKind::kLpm;
  if (name == "pdca") return SolverKind::kPdca;
  if (name == "pdcae" || name == "pdca_e") return SolverKind::kPdcaE;
  if (name == "adca") return SolverKind::kAdca;
  return std::nullopt;
}

SolverConfig cell_solver_config(const CellConfig& cell, double lipschitz) {
  SolverConfig config;
  config.lambda = cell.lambda_multiple * lipschitz;
  config.delta = cell.delta_factor * cell.lambda_multiple;  // = factor * lambda/L_f
  config.mu = 0.0;  // endpoint
  config.tol = cell.tol;
  config.max_outer = cell.max_outer;
  config.max_inner = cell.max_inner;
  return config;
}

SolveResult run_solver(SolverKind kind, const DCProblem& problem,
                       const Vector& x0, const SolverConfig& config, int q,
                       double rho) {
  switch (kind) {
    case SolverKind::kCdca: return cdca_solve(problem, x0, config);
    case SolverKind::kLpm: return lpm_solve(problem, x0, config);
    case SolverKind::kPdca: return pdca_solve(problem, x0, config);
    case SolverKind::kPdcaE: return pdca_e_solve(problem, x0, config);
    case SolverKind::kAdca: return adca_solve(problem, x0, config, q, rho);
  }
  throw std::invalid_argument("run_solver: unknown solver kind");
}

BenchmarkReport run_sweep(const std::vector<InstanceSpec>& sizes,
                          const std::vector<CellConfig>& cells,
                          const SweepOptions& options) {
  if (options.trials < 1) {
    throw std::invalid_argument("run_sweep: trials must be positive");
  }
  if (sizes.empty() || cells.empty()) {
    throw std::invalid_argument("run_sweep: need at least one size and one cell");
  }

  BenchmarkReport report;
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (const CellConfig& cell : cells) {
      ReportRow row;
      row.solver = cell.solver;
      row.rows = sizes[s].rows;
      row.cols = sizes[s].cols;
      row.sparsity = sizes[s].sparsity;
      row.lambda_multiple = cell.lambda_multiple;
      row.tol = cell.tol;
      row.trials.resize(options.trials);
      const std::size_t row_index = report.rows.size();
      report.rows.push_back(std::move(row));
      for (int t = 0; t < options.trials; ++t) {
        tasks.push_back(Task{row_index, s, t});
      }
    }
  }

  auto cell_of = [&](std::size_t row_index) -> const CellConfig& {
    return cells[row_index % cells.size()];
  };

  auto run_task = [&](const Task& task) {
    TrialResult& slot = report.rows[task.row].trials[task.trial];
    try {
      InstanceSpec spec = sizes[task.size_index];
      spec.seed = options.base_seed + static_cast<std::uint64_t>(task.trial);
      Instance instance = generate_instance(spec);
      const LipschitzEstimate lipschitz =
          options.param_scale == ParamScale::kRawDesign
              ? raw_design_lipschitz(instance, kPowerTolerance, kPowerMaxIters)
              : estimate_lipschitz(instance.data, kPowerTolerance,
                                   kPowerMaxIters);
      const Vector x0 = starting_point(spec);
      DCProblem problem = make_least_squares_problem(
          std::move(instance.data), spec.regularizer, lipschitz.value);

      const CellConfig& cell = cell_of(task.row);
      SolverConfig config = cell_solver_config(cell, lipschitz.value);
      config.max_total = options.titer_cap;
      config.check_invariants = options.check_invariants;
      config.record_trace = false;

      SolveResult result =
          run_solver(cell.solver, problem, x0, config, cell.adca_q,
                     cell.adca_rho_factor * lipschitz.value);
      slot.summary = result.summary;
      slot.hit_cap = options.titer_cap > 0 &&
                     result.summary.total_iterations >= options.titer_cap;
    } catch (const std::exception& error) {
      slot.failed = true;
      slot.error = error.what();
    }
  };

  const int jobs = std::max(1, options.jobs);
  if (jobs == 1 || tasks.size() == 1) {
    for (const Task& task : tasks) run_task(task);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < tasks.size();
           i = next.fetch_add(1)) {
        run_task(tasks[i]);
      }
    };
    std::vector<std::thread> pool;
    const int count = std::min<std::size_t>(jobs, tasks.size());
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Means over contributing trials, accumulated in trial order so the report
  // is identical for any jobs value.
  for (ReportRow& row : report.rows) {
    double iter = 0, init = 0, titer = 0, fval = 0, seconds = 0;
    int count = 0;
    for (const TrialResult& trial : row.trials) {
      if (trial.failed) continue;
      if (trial.hit_cap) {
        row.max_flag = true;
        continue;
      }
      iter += static_cast<double>(trial.summary.outer_iterations);
      init += static_cast<double>(trial.summary.extra_inner_iterations);
      titer += static_cast<double>(trial.summary.total_iterations);
      fval += trial.summary.final_objective;
      seconds += trial.summary.wall_seconds;
      ++count;
    }
    row.contributing_trials = count;
    if (count > 0) {
      row.mean_iter = iter / count;
      row.mean_init = init / count;
      row.mean_titer = titer / count;
      row.mean_fval = fval / count;
      row.mean_seconds = seconds / count;
    }
  }
  return report;
}

void emit_report_csv(const BenchmarkReport& report, std::ostream& out) {
  using internal::format_double;
  out << "solver,m,n,K,lambda_multiple,tol,trials,mean_iter,mean_init,"
         "mean_titer,mean_fval,mean_seconds,max_flag\n";
  for (const ReportRow& row : report.rows) {
    out << to_string(row.solver) << ',' << row.rows << ',' << row.cols << ','
        << row.sparsity << ',' << format_double(row.lambda_multiple) << ','
        << format_double(row.tol) << ',' << row.contributing_trials << ','
        << format_double(row.mean_iter) << ',' << format_double(row.mean_init)
        << ',' << format_double(row.mean_titer) << ','
        << format_double(row.mean_fval) << ','
        << format_double(row.mean_seconds) << ',' << (row.max_flag ? 1 : 0)
        << '\n';
  }
}

void emit_report_json(const BenchmarkReport& report, std::ostream& out) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& row : report.rows) {
    nlohmann::json trials = nlohmann::json::array();
    for (const TrialResult& trial : row.trials) {
      trials.push_back({
          {"iter", trial.summary.outer_iterations},
          {"init", trial.summary.extra_inner_iterations},
          {"titer", trial.summary.total_iterations},
          {"fval", trial.summary.final_objective},
          {"seconds", trial.summary.wall_seconds},
          {"reason", to_string(trial.summary.reason)},
          {"hit_cap", trial.hit_cap},
          {"failed", trial.failed},
      });
    }
    rows.push_back({
        {"solver", to_string(row.solver)},
        {"m", row.rows},
        {"n", row.cols},
        {"K", row.sparsity},
        {"lambda_multiple", row.lambda_multiple},
        {"tol", row.tol},
        {"trials", row.contributing_trials},
        {"mean_iter", row.mean_iter},
        {"mean_init", row.mean_init},
        {"mean_titer", row.mean_titer},
        {"mean_fval", row.mean_fval},
        {"mean_seconds", row.mean_seconds},
        {"max_flag", row.max_flag},
        {"trial_results", std::move(trials)},
    });
  }
  out << nlohmann::json{{"rows", std::move(rows)}}.dump(2) << '\n';
}

void emit_report(const BenchmarkReport& report, ReportFormat format,
                 const std::string& path) {
  std::ostringstream rendered;
  if (format == ReportFormat::kCsv) {
    emit_report_csv(report, rendered);
  } else {
    emit_report_json(report, rendered);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::runtime_error("emit_report: cannot open '" + path + "' for writing");
  }
  file << rendered.str();
  if (!file.flush()) {
    throw std::runtime_error("emit_report: failed writing '" + path + "'");
  }
}

}  // namespace dcopt
