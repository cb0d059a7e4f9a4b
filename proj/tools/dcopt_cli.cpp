// Command-line front end: single solver runs with tracing, lambda-sensitivity
// sweeps, solver comparison sweeps, and random instance generation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcopt/benchmark.hpp"

namespace {

using dcopt::CellConfig;
using dcopt::InstanceSpec;
using dcopt::RegularizerKind;
using dcopt::RegularizerSpec;
using dcopt::SolverKind;
using dcopt::Vector;

struct SizeTriple {
  int m = 0, n = 0, k = 0;
};

SizeTriple parse_size(const std::string& text) {
  SizeTriple size;
  char sep1 = 0, sep2 = 0;
  std::istringstream in(text);
  if (!(in >> size.m >> sep1 >> size.n >> sep2 >> size.k) || sep1 != 'x' ||
      sep2 != 'x' || !in.eof() || size.m < 1 || size.n < 1 || size.k < 1) {
    throw CLI::ValidationError("--size", "expected MxNxK, e.g. 120x512x20");
  }
  return size;
}

std::vector<SizeTriple> parse_sizes(const std::string& text) {
  std::vector<SizeTriple> sizes;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) sizes.push_back(parse_size(item));
  if (sizes.empty()) {
    throw CLI::ValidationError("--sizes", "expected a comma-separated list");
  }
  return sizes;
}

RegularizerSpec make_regularizer(const std::string& family, double gamma,
                                 double epsilon) {
  RegularizerSpec spec;
  spec.kind = family == "log" ? RegularizerKind::kLogarithmic
                              : RegularizerKind::kL1MinusL2;
  spec.gamma = gamma;
  spec.epsilon = epsilon;
  return spec;
}

// Relative output paths can be redirected with DCOPT_OUT_DIR.
std::string resolve_out_path(const std::string& path) {
  const char* base = std::getenv("DCOPT_OUT_DIR");
  if (base == nullptr || *base == '\0') return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base) / p).string();
}

dcopt::ReportFormat parse_format(const std::string& name) {
  return name == "json" ? dcopt::ReportFormat::kJson : dcopt::ReportFormat::kCsv;
}

int run_gen_instance(const std::string& size_text, std::uint64_t seed,
                     const std::string& family, double gamma, double epsilon,
                     double noise, const std::string& out) {
  const SizeTriple size = parse_size(size_text);
  InstanceSpec spec;
  spec.rows = size.m;
  spec.cols = size.n;
  spec.sparsity = size.k;
  spec.seed = seed;
  spec.noise_scale = noise;
  spec.regularizer = make_regularizer(family, gamma, epsilon);
  const dcopt::Instance instance = dcopt::generate_instance(spec);

  nlohmann::json matrix = nlohmann::json::array();
  for (dcopt::Index i = 0; i < instance.data.matrix.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (dcopt::Index j = 0; j < instance.data.matrix.cols(); ++j) {
      row.push_back(instance.data.matrix(i, j));
    }
    matrix.push_back(std::move(row));
  }
  nlohmann::json doc{
      {"m", size.m},
      {"n", size.n},
      {"k", size.k},
      {"seed", seed},
      {"noise_scale", noise},
      {"regularizer",
       {{"kind", family}, {"gamma", gamma}, {"epsilon", epsilon}}},
      {"matrix", std::move(matrix)},
      {"observations", std::vector<double>(instance.data.observations.begin(),
                                           instance.data.observations.end())},
      {"ground_truth", std::vector<double>(instance.ground_truth.begin(),
                                           instance.ground_truth.end())},
      {"support", instance.support},
  };

  const std::string path = resolve_out_path(out);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  file << doc.dump(2) << '\n';
  if (!file.flush()) throw std::runtime_error("failed writing '" + path + "'");
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DC least-squares solver suite and benchmark harness"};
  app.require_subcommand(1);

  // gen-instance ------------------------------------------------------------
  auto* gen = app.add_subcommand("gen-instance",
                                 "Generate a random instance as JSON");
  std::string gen_size, gen_family = "l12", gen_out;
  std::uint64_t gen_seed = 1;
  double gen_gamma = 0.01, gen_epsilon = 0.5, gen_noise = 0.001;
  gen->add_option("--size", gen_size, "Problem size MxNxK")->required();
  gen->add_option("--seed", gen_seed, "Instance seed");
  gen->add_option("--family", gen_family, "Regularizer family")
      ->check(CLI::IsMember({"l12", "log"}));
  gen->add_option("--gamma", gen_gamma, "Regularization weight");
  gen->add_option("--epsilon", gen_epsilon, "Logarithmic smoothing constant");
  gen->add_option("--noise", gen_noise, "Observation noise scale");
  gen->add_option("--out", gen_out, "Output JSON path")->required();

  // solve --------------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "Run one solver on one instance");
  std::string solve_size, solve_family = "l12", solve_solver = "cdca";
  std::string solve_trace, solve_out, solve_scale = "raw";
  std::uint64_t solve_seed = 1;
  double solve_tol = 1e-5, solve_lambda_mult = 0.1, solve_delta_factor = 1.99;
  double solve_mu = 0.0, solve_gamma = 0.01, solve_epsilon = 0.5;
  double solve_noise = 0.001, solve_rho_factor = 1.1;
  int solve_q = 5, solve_max_inner = 10000;
  long solve_max_outer = 100000, solve_titer_cap = 0;
  bool solve_check = true;
  solve->add_option("--size", solve_size, "Problem size MxNxK")->required();
  solve->add_option("--family", solve_family, "Regularizer family")
      ->check(CLI::IsMember({"l12", "log"}));
  solve->add_option("--solver", solve_solver, "Solver name")
      ->check(CLI::IsMember({"cdca", "lpm", "pdca", "pdcae", "adca"}));
  solve->add_option("--seed", solve_seed, "Instance seed");
  solve->add_option("--tol", solve_tol, "Relative-change tolerance");
  solve->add_option("--lambda-mult", solve_lambda_mult,
                    "lambda as a multiple of L_f");
  solve->add_option("--delta-factor", solve_delta_factor,
                    "delta as a multiple of lambda/L_f");
  solve->add_option("--mu", solve_mu, "Prox step; 0 selects the endpoint");
  solve->add_option("--scale-from", solve_scale,
                    "Lipschitz scale for lambda/mu/delta/rho")
      ->check(CLI::IsMember({"raw", "instance"}));
  solve->add_option("--gamma", solve_gamma, "Regularization weight");
  solve->add_option("--epsilon", solve_epsilon, "Logarithmic smoothing constant");
  solve->add_option("--noise", solve_noise, "Observation noise scale");
  solve->add_option("--q", solve_q, "Objective history window (adca)");
  solve->add_option("--rho-factor", solve_rho_factor,
                    "rho as a multiple of L_f (adca)");
  solve->add_option("--max-outer", solve_max_outer, "Outer iteration budget");
  solve->add_option("--max-inner", solve_max_inner, "Inner iteration budget");
  solve->add_option("--titer-cap", solve_titer_cap,
                    "Total iteration cap (0 = unbounded)");
  solve->add_flag("--check-invariants,!--no-check-invariants", solve_check,
                  "Run the per-iteration monitors");
  solve->add_option("--trace", solve_trace, "Write a per-iteration trace file");
  solve->add_option("--out", solve_out, "Write a JSON run summary");

  // sweep-lambda ---------------------------------------------------------------
  auto* sweep_lambda = app.add_subcommand(
      "sweep-lambda", "Sweep lambda multiples for one solver and size");
  std::string sl_size, sl_family = "l12", sl_solver = "cdca", sl_out;
  std::string sl_lambdas = "0.001,0.01,0.1,0.5", sl_format = "csv";
  std::string sl_scale = "raw";
  std::uint64_t sl_seed = 1;
  double sl_tol = 1e-5, sl_delta_factor = 1.99;
  double sl_gamma = 0.01, sl_epsilon = 0.5, sl_noise = 0.001;
  int sl_trials = 30, sl_jobs = 0;
  long sl_cap = 100000;
  bool sl_check = false;
  sweep_lambda->add_option("--size", sl_size, "Problem size MxNxK")->required();
  sweep_lambda->add_option("--family", sl_family, "Regularizer family")
      ->check(CLI::IsMember({"l12", "log"}));
  sweep_lambda->add_option("--solver", sl_solver, "Solver name")
      ->check(CLI::IsMember({"cdca", "lpm", "pdca", "pdcae", "adca"}));
  sweep_lambda->add_option("--lambdas", sl_lambdas,
                           "Comma-separated lambda multiples of L_f");
  sweep_lambda->add_option("--trials", sl_trials, "Trials per cell");
  sweep_lambda->add_option("--tol", sl_tol, "Relative-change tolerance");
  sweep_lambda->add_option("--delta-factor", sl_delta_factor,
                           "delta as a multiple of lambda/L_f");
  sweep_lambda->add_option("--gamma", sl_gamma, "Regularization weight");
  sweep_lambda->add_option("--epsilon", sl_epsilon,
                           "Logarithmic smoothing constant");
  sweep_lambda->add_option("--noise", sl_noise, "Observation noise scale");
  sweep_lambda->add_option("--seed", sl_seed, "Base seed (trial t adds t)");
  sweep_lambda->add_option("--jobs", sl_jobs,
                           "Worker threads (0 = hardware concurrency)");
  sweep_lambda->add_option("--titer-cap", sl_cap, "Total iteration cap");
  sweep_lambda->add_flag("--check-invariants", sl_check,
                         "Run monitors inside timed solves");
  sweep_lambda->add_option("--scale-from", sl_scale,
                           "Lipschitz scale for lambda/mu/delta/rho")
      ->check(CLI::IsMember({"raw", "instance"}));
  sweep_lambda->add_option("--format", sl_format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_lambda->add_option("--out", sl_out, "Report output path")->required();

  // sweep-compare --------------------------------------------------------------
  auto* sweep_compare = app.add_subcommand(
      "sweep-compare", "Compare solvers across sizes at fixed lambda");
  std::string sc_sizes, sc_family = "l12", sc_solvers = "cdca,adca,pdcae";
  std::string sc_out, sc_format = "csv", sc_scale = "raw";
  std::uint64_t sc_seed = 1;
  double sc_tol = 1e-6, sc_lambda_mult = 0.1, sc_delta_factor = 1.99;
  double sc_gamma = 0.01, sc_epsilon = 0.5, sc_noise = 0.001;
  double sc_rho_factor = 1.1;
  double sc_tol_cdca = 0.0, sc_tol_adca = 0.0, sc_tol_pdcae = 0.0;
  double sc_tol_pdca = 0.0, sc_tol_lpm = 0.0;
  int sc_trials = 30, sc_jobs = 0, sc_q = 5;
  long sc_cap = 100000;
  sweep_compare->add_option("--sizes", sc_sizes, "Comma-separated MxNxK list")
      ->required();
  sweep_compare->add_option("--family", sc_family, "Regularizer family")
      ->check(CLI::IsMember({"l12", "log"}));
  sweep_compare->add_option("--solvers", sc_solvers,
                            "Comma-separated solver list");
  sweep_compare->add_option("--trials", sc_trials, "Trials per cell");
  sweep_compare->add_option("--tol", sc_tol, "Default tolerance");
  sweep_compare->add_option("--tol-cdca", sc_tol_cdca, "Override for cdca");
  sweep_compare->add_option("--tol-adca", sc_tol_adca, "Override for adca");
  sweep_compare->add_option("--tol-pdcae", sc_tol_pdcae, "Override for pdcae");
  sweep_compare->add_option("--tol-pdca", sc_tol_pdca, "Override for pdca");
  sweep_compare->add_option("--tol-lpm", sc_tol_lpm, "Override for lpm");
  sweep_compare->add_option("--lambda-mult", sc_lambda_mult,
                            "lambda as a multiple of L_f");
  sweep_compare->add_option("--delta-factor", sc_delta_factor,
                            "delta as a multiple of lambda/L_f");
  sweep_compare->add_option("--q", sc_q, "Objective history window (adca)");
  sweep_compare->add_option("--rho-factor", sc_rho_factor,
                            "rho as a multiple of L_f (adca)");
  sweep_compare->add_option("--gamma", sc_gamma, "Regularization weight");
  sweep_compare->add_option("--epsilon", sc_epsilon,
                            "Logarithmic smoothing constant");
  sweep_compare->add_option("--noise", sc_noise, "Observation noise scale");
  sweep_compare->add_option("--seed", sc_seed, "Base seed (trial t adds t)");
  sweep_compare->add_option("--jobs", sc_jobs,
                            "Worker threads (0 = hardware concurrency)");
  sweep_compare->add_option("--titer-cap", sc_cap, "Total iteration cap");
  sweep_compare->add_option("--scale-from", sc_scale,
                            "Lipschitz scale for lambda/mu/delta/rho")
      ->check(CLI::IsMember({"raw", "instance"}));
  sweep_compare->add_option("--format", sc_format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_compare->add_option("--out", sc_out, "Report output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      return run_gen_instance(gen_size, gen_seed, gen_family, gen_gamma,
                              gen_epsilon, gen_noise, gen_out);
    }

    if (solve->parsed()) {
      const SizeTriple size = parse_size(solve_size);
      InstanceSpec spec;
      spec.rows = size.m;
      spec.cols = size.n;
      spec.sparsity = size.k;
      spec.seed = solve_seed;
      spec.noise_scale = solve_noise;
      spec.regularizer =
          make_regularizer(solve_family, solve_gamma, solve_epsilon);

      dcopt::Instance instance = dcopt::generate_instance(spec);
      const auto lf =
          solve_scale == "raw"
              ? dcopt::raw_design_lipschitz(instance, 1e-9, 100000)
              : dcopt::estimate_lipschitz(instance.data, 1e-9, 100000);
      const Vector x0 = dcopt::starting_point(spec);
      const dcopt::DCProblem problem = dcopt::make_least_squares_problem(
          std::move(instance.data), spec.regularizer, lf.value);

      dcopt::SolverConfig config;
      config.lambda = solve_lambda_mult * lf.value;
      config.delta = solve_delta_factor * solve_lambda_mult;
      config.mu = solve_mu;
      config.tol = solve_tol;
      config.max_outer = solve_max_outer;
      config.max_inner = solve_max_inner;
      config.max_total = solve_titer_cap;
      config.check_invariants = solve_check;
      config.record_trace = true;

      const SolverKind kind = *dcopt::parse_solver(solve_solver);
      const dcopt::SolveResult result =
          dcopt::run_solver(kind, problem, x0, config, solve_q,
                            solve_rho_factor * lf.value);

      std::cout << "solver=" << solve_solver << " family=" << solve_family
                << " size=" << solve_size << " seed=" << solve_seed << "\n"
                << "L_f=" << lf.value << " (" << solve_scale
                << " scale) lambda=" << config.lambda << " tol=" << config.tol
                << "\n"
                << "Iter=" << result.summary.outer_iterations
                << " InIt=" << result.summary.extra_inner_iterations
                << " tIter=" << result.summary.total_iterations
                << " fval=" << result.summary.final_objective
                << " seconds=" << result.summary.wall_seconds
                << " reason=" << dcopt::to_string(result.summary.reason) << "\n";
      if (solve_check) {
        std::cout << "merit_violations=" << result.trace.merit_violations
                  << " residual_bound_violations="
                  << result.trace.residual_bound_violations << "\n";
      }

      if (!solve_trace.empty()) {
        const std::string path = resolve_out_path(solve_trace);
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open '" + path + "'");
        dcopt::write_trace(file, result.trace);
        if (!file.flush()) throw std::runtime_error("failed writing '" + path + "'");
        std::cout << "wrote " << path << "\n";
      }
      if (!solve_out.empty()) {
        nlohmann::json doc{
            {"solver", solve_solver},
            {"family", solve_family},
            {"m", size.m},
            {"n", size.n},
            {"k", size.k},
            {"seed", solve_seed},
            {"lf", lf.value},
            {"iter", result.summary.outer_iterations},
            {"init", result.summary.extra_inner_iterations},
            {"titer", result.summary.total_iterations},
            {"fval", result.summary.final_objective},
            {"seconds", result.summary.wall_seconds},
            {"reason", dcopt::to_string(result.summary.reason)},
            {"converged", result.summary.converged},
            {"merit_violations", result.trace.merit_violations},
            {"residual_bound_violations",
             result.trace.residual_bound_violations},
        };
        const std::string path = resolve_out_path(solve_out);
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open '" + path + "'");
        file << doc.dump(2) << '\n';
        if (!file.flush()) throw std::runtime_error("failed writing '" + path + "'");
        std::cout << "wrote " << path << "\n";
      }
      // Non-convergence is data, not a process failure.
      return 0;
    }

    std::vector<InstanceSpec> sizes;
    std::vector<CellConfig> cells;
    dcopt::SweepOptions options;
    std::string out_path, format;

    if (sweep_lambda->parsed()) {
      const SizeTriple size = parse_size(sl_size);
      InstanceSpec spec;
      spec.rows = size.m;
      spec.cols = size.n;
      spec.sparsity = size.k;
      spec.noise_scale = sl_noise;
      spec.regularizer = make_regularizer(sl_family, sl_gamma, sl_epsilon);
      sizes.push_back(spec);

      std::istringstream in(sl_lambdas);
      std::string item;
      while (std::getline(in, item, ',')) {
        CellConfig cell;
        cell.solver = *dcopt::parse_solver(sl_solver);
        cell.lambda_multiple = std::stod(item);
        cell.delta_factor = sl_delta_factor;
        cell.tol = sl_tol;
        cells.push_back(cell);
      }
      if (cells.empty()) {
        throw CLI::ValidationError("--lambdas", "expected at least one value");
      }
      options.trials = sl_trials;
      options.titer_cap = sl_cap;
      options.base_seed = sl_seed;
      options.jobs = sl_jobs;
      options.check_invariants = sl_check;
      options.param_scale = sl_scale == "raw" ? dcopt::ParamScale::kRawDesign
                                              : dcopt::ParamScale::kInstance;
      out_path = sl_out;
      format = sl_format;
    } else if (sweep_compare->parsed()) {
      for (const SizeTriple& size : parse_sizes(sc_sizes)) {
        InstanceSpec spec;
        spec.rows = size.m;
        spec.cols = size.n;
        spec.sparsity = size.k;
        spec.noise_scale = sc_noise;
        spec.regularizer = make_regularizer(sc_family, sc_gamma, sc_epsilon);
        sizes.push_back(spec);
      }
      std::istringstream in(sc_solvers);
      std::string item;
      while (std::getline(in, item, ',')) {
        const auto kind = dcopt::parse_solver(item);
        if (!kind) {
          throw CLI::ValidationError("--solvers", "unknown solver '" + item + "'");
        }
        CellConfig cell;
        cell.solver = *kind;
        cell.lambda_multiple = sc_lambda_mult;
        cell.delta_factor = sc_delta_factor;
        cell.adca_q = sc_q;
        cell.adca_rho_factor = sc_rho_factor;
        cell.tol = sc_tol;
        switch (*kind) {
          case SolverKind::kCdca:
            if (sc_tol_cdca > 0) cell.tol = sc_tol_cdca;
            break;
          case SolverKind::kAdca:
            if (sc_tol_adca > 0) cell.tol = sc_tol_adca;
            break;
          case SolverKind::kPdcaE:
            if (sc_tol_pdcae > 0) cell.tol = sc_tol_pdcae;
            break;
          case SolverKind::kPdca:
            if (sc_tol_pdca > 0) cell.tol = sc_tol_pdca;
            break;
          case SolverKind::kLpm:
            if (sc_tol_lpm > 0) cell.tol = sc_tol_lpm;
            break;
        }
        cells.push_back(cell);
      }
      if (cells.empty()) {
        throw CLI::ValidationError("--solvers", "expected at least one solver");
      }
      options.trials = sc_trials;
      options.titer_cap = sc_cap;
      options.base_seed = sc_seed;
      options.jobs = sc_jobs;
      options.param_scale = sc_scale == "raw" ? dcopt::ParamScale::kRawDesign
                                              : dcopt::ParamScale::kInstance;
      out_path = sc_out;
      format = sc_format;
    }

    if (options.jobs <= 0) {
      const unsigned hardware = std::thread::hardware_concurrency();
      options.jobs = hardware == 0 ? 1 : static_cast<int>(hardware);
    }

    const dcopt::BenchmarkReport report =
        dcopt::run_sweep(sizes, cells, options);
    const std::string path = resolve_out_path(out_path);
    dcopt::emit_report(report, parse_format(format), path);
    std::cout << "wrote " << path << "\n";
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
