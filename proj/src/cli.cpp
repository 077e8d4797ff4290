#include "rdkw/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "rdkw/bench.hpp"
#include "rdkw/error.hpp"
#include "rdkw/objectives.hpp"
#include "rdkw/optimize.hpp"
#include "rdkw/perturb.hpp"
#include "rdkw/schedule.hpp"

namespace rdkw::cli {
namespace {

constexpr double kExactnessTolerance = 1e-10;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      items.push_back(item);
    }
  }
  return items;
}

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct UsageError : Error {
  using Error::Error;
};

/// Options shared by `run` and `bench`.
struct ExperimentFlags {
  std::size_t p = 10;
  std::string alg;
  std::string objective = "quadratic";
  double sigma = 0.0;
  std::uint64_t budget = 2000;
  std::uint64_t seed = 0;
  double alpha = 0.602;
  double gamma = 0.101;
  double c = 0.1;
  double B = 0.0;
  double theta0 = 1.0;
  bool force = false;

  CLI::Option* alg_opt = nullptr;
  CLI::Option* objective_opt = nullptr;
  CLI::Option* sigma_opt = nullptr;
  CLI::Option* budget_opt = nullptr;
  CLI::Option* c_opt = nullptr;
  CLI::Option* B_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--p", p, "Problem dimension")->capture_default_str();
    alg_opt = app->add_option("--alg", alg, "Algorithm (dspkw-2c, rdkw-2h, rdkw-2r, dspkw-1c, rdkw-1h, rdkw-1r)");
    objective_opt =
        app->add_option("--objective", objective, "quadratic | fourth-order")->capture_default_str();
    sigma_opt = app->add_option("--sigma", sigma, "Noise scale")->capture_default_str();
    budget_opt = app->add_option("--budget", budget, "Simulation budget (objective evaluations)")->capture_default_str();
    app->add_option("--seed", seed, "Base seed for every random stream")->capture_default_str();
    app->add_option("--alpha", alpha, "Step-size exponent")->capture_default_str();
    app->add_option("--gamma", gamma, "Sensitivity exponent")->capture_default_str();
    c_opt = app->add_option("--c", c, "Sensitivity numerator")->capture_default_str();
    B_opt = app->add_option("--B", B, "Step-size stability offset (default: 0.1 x iterations)");
    app->add_option("--theta0", theta0, "Initial point fill value")->capture_default_str();
    app->add_flag("--force", force, "Run even if the schedule fails A2");
  }

  ObjectiveKind objective_kind() const {
    auto kind = parse_objective_kind(objective);
    if (!kind) {
      throw UsageError("unknown objective '" + objective + "'");
    }
    return *kind;
  }

  ScheduleParams schedule(double default_c, double default_b_fraction) const {
    ScheduleParams params;
    params.alpha = alpha;
    params.gamma = gamma;
    params.c = c_opt->count() > 0 ? c : default_c;
    params.b_fraction = default_b_fraction;
    if (B_opt->count() > 0) {
      params.B = B;
    }
    return params;
  }
};

Algorithm require_algorithm(const std::string& name) {
  auto algorithm = parse_algorithm(name);
  if (!algorithm) {
    throw UsageError("unknown algorithm '" + name + "'");
  }
  return *algorithm;
}

void open_output(std::ofstream& file, const std::string& path) {
  file.open(path, std::ios::binary);
  if (!file) {
    throw UsageError("cannot open '" + path + "' for writing");
  }
}

int cmd_verify(std::size_t p, const std::string& source, const std::string& dump, std::ostream& out,
               std::ostream& err) {
  if (p == 0) {
    err << "verify: --p must be >= 1\n";
    return kUsage;
  }
  std::optional<PerturbationCycle> cycle;
  if (source == "circulant") {
    cycle.emplace(build_circulant_cycle({p}));
  } else if (source == "hadamard") {
    cycle.emplace(build_hadamard_cycle(p));
  } else {
    err << "verify: unknown --source '" << source << "' (circulant | hadamard)\n";
    return kUsage;
  }

  const CycleReport report = verify_cycle(*cycle);
  const bool ok = report.p1_residual <= kExactnessTolerance && report.p2_residual <= kExactnessTolerance;
  out << "source: " << source << '\n'
      << "p: " << p << '\n'
      << "P: " << cycle->cycle_length() << '\n'
      << "p1_residual: " << full_precision(report.p1_residual) << '\n'
      << "p2_residual: " << full_precision(report.p2_residual) << '\n'
      << "max_col_norm: " << full_precision(report.max_col_norm) << '\n'
      << "status: " << (ok ? "ok" : "FAILED") << '\n';

  if (!dump.empty()) {
    std::ofstream file;
    open_output(file, dump);
    const Eigen::MatrixXd& y = cycle->columns();
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      for (Eigen::Index i = 0; i < y.rows(); ++i) {
        file << (i == 0 ? "" : ",") << full_precision(y(i, j));
      }
      file << '\n';
    }
  }
  return ok ? kSuccess : kValidation;
}

int cmd_run(const ExperimentFlags& flags, const std::string& trajectory_path, std::ostream& out, std::ostream& err) {
  if (flags.p == 0) {
    throw UsageError("--p must be >= 1");
  }
  const Algorithm algorithm = require_algorithm(flags.alg.empty() ? "dspkw-2c" : flags.alg);
  const ObjectiveKind objective_kind = flags.objective_kind();

  OptimizerConfig config;
  config.dimension = flags.p;
  config.estimator = estimator_of(algorithm);
  switch (source_of(algorithm)) {
    case PerturbationSource::Kind::Circulant:
      config.source = PerturbationSource::circulant();
      break;
    case PerturbationSource::Kind::Hadamard:
      config.source = PerturbationSource::hadamard();
      break;
    case PerturbationSource::Kind::Bernoulli:
      config.source = PerturbationSource::bernoulli(direction_seed(flags.seed, 0));
      break;
  }
  config.simulation_budget = flags.budget;
  const std::uint64_t iterations = iteration_budget(config.estimator, flags.budget);
  if (iterations == 0) {
    throw UsageError("--budget too small for " + std::string(to_string(algorithm)));
  }
  config.schedule = flags.schedule(0.1, 0.1).resolve(iterations);
  config.theta0 = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(flags.p), flags.theta0);
  config.record_trajectory = !trajectory_path.empty();

  const A2Verdict verdict = validate_a2(config.schedule);
  if (!verdict.ok && !flags.force) {
    err << "run: step-size schedule violates A2: " << verdict.message() << " (pass --force to run anyway)\n";
    return kValidation;
  }

  NoisyObjective objective = make_benchmark_objective(objective_kind, flags.p, flags.sigma,
                                                      replication_seed(flags.seed, 0));
  const RunResult result = rdkw::run(config, objective);
  const Eigen::VectorXd& star = *objective.theta_star();

  out << "algorithm: " << to_string(algorithm) << '\n'
      << "objective: " << to_string(objective_kind) << '\n'
      << "sigma: " << flags.sigma << '\n'
      << "budget: " << flags.budget << '\n'
      << "schedule: a_n = " << config.schedule.a_scale << "/(n+" << config.schedule.B << "+1)^"
      << config.schedule.alpha << ", delta_n = " << config.schedule.c << "/(n+1)^" << config.schedule.gamma << '\n'
      << "iterations: " << result.iterations << '\n'
      << "simulations: " << result.simulations_used << '\n'
      << "diverged: " << (result.diverged ? "yes" : "no") << '\n'
      << "nmse: " << format_scientific(nmse(result.theta_end, config.theta0, star)) << '\n'
      << "loss: " << full_precision(objective.loss(result.theta_end)) << '\n';
  if (result.diverged) {
    err << "run: diverged: " << result.diagnostic << '\n';
  }

  if (!trajectory_path.empty()) {
    std::ofstream file;
    open_output(file, trajectory_path);
    write_trajectory_csv(file, result.trajectory, star);
  }
  return result.diverged ? kDivergence : kSuccess;
}

struct BenchFlags {
  int table = 0;
  std::uint64_t reps = 100;
  unsigned threads = 0;
  std::string csv;
  CLI::Option* table_opt = nullptr;
};

int cmd_bench(const ExperimentFlags& flags, const BenchFlags& bench, std::ostream& out, std::ostream& err) {
  if (flags.p == 0) {
    throw UsageError("--p must be >= 1");
  }
  if (bench.reps == 0) {
    throw UsageError("--reps must be >= 1");
  }

  std::optional<TablePreset> preset;
  if (bench.table_opt->count() > 0) {
    try {
      preset = table_preset(bench.table);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }

  ExperimentPlan base;
  base.dimension = flags.p;
  base.replications = bench.reps;
  base.base_seed = flags.seed;
  base.theta0_fill = flags.theta0;
  base.force = flags.force;
  base.parallelism = bench.threads;
  base.objective = preset && flags.objective_opt->count() == 0 ? preset->objective : flags.objective_kind();
  base.budget = preset && flags.budget_opt->count() == 0 ? preset->budget : flags.budget;
  base.schedule = preset ? flags.schedule(preset->c, preset->b_fraction) : flags.schedule(0.1, 0.1);

  if (flags.alg_opt->count() > 0) {
    for (const auto& name : split_list(flags.alg)) {
      base.algorithms.push_back(require_algorithm(name));
    }
    if (base.algorithms.empty()) {
      throw UsageError("--alg lists no algorithms");
    }
  } else {
    base.algorithms = algorithms_for(preset ? preset->estimator : EstimatorKind::TwoSided);
  }

  std::vector<double> sigmas;
  if (flags.sigma_opt->count() > 0 || !preset) {
    sigmas.push_back(flags.sigma);
  } else {
    sigmas.assign(preset->sigmas.begin(), preset->sigmas.end());
  }

  if (!flags.force) {
    for (Algorithm algorithm : base.algorithms) {
      const auto iterations = iteration_budget(estimator_of(algorithm), base.budget);
      const A2Verdict verdict = validate_a2(base.schedule.resolve(iterations));
      if (!verdict.ok) {
        err << "bench: step-size schedule violates A2: " << verdict.message() << " (pass --force to run anyway)\n";
        return kValidation;
      }
    }
  }

  std::vector<ExperimentResult> results;
  for (double sigma : sigmas) {
    ExperimentPlan plan = base;
    plan.sigma = sigma;
    results.push_back(run_experiment(plan));
    if (preset) {
      out << "Table " << preset->table << ": ";
    }
    out << format_table(results.back()) << '\n';
  }

  if (!bench.csv.empty()) {
    std::ofstream file;
    open_output(file, bench.csv);
    write_csv(file, results);
  }

  for (const auto& result : results) {
    if (divergence_dominated(result)) {
      err << "bench: over half of the replications diverged for at least one algorithm\n";
      return kDivergence;
    }
  }
  return kSuccess;
}

/// Puts config-file settings right after the subcommand token so explicit
/// flags, which come later, take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) {
        throw UsageError("--config needs a file argument");
      }
      path = args[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
    } else {
      rest.push_back(a);
    }
  }
  if (!path || rest.empty()) {
    return rest;
  }
  std::ifstream file(*path, std::ios::binary);
  if (!file) {
    throw UsageError("cannot read config file '" + *path + "'");
  }
  std::ostringstream text;
  text << file.rdbuf();
  std::map<std::string, std::string> entries;
  try {
    entries = parse_config(text.str());
  } catch (const ParseError& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }

  std::vector<std::string> expanded{rest.front()};
  for (const auto& [key, value] : entries) {
    expanded.push_back("--" + key + "=" + value);
  }
  expanded.insert(expanded.end(), rest.begin() + 1, rest.end());
  return expanded;
}

}  // namespace

std::map<std::string, std::string> parse_config(std::string_view text) {
  std::map<std::string, std::string> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    if (key.rfind("--", 0) == 0) {
      key.erase(0, 2);
    }
    if (key.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty key");
    }
    entries[key] = trim(std::string_view(stripped).substr(eq + 1));
  }
  return entries;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  CLI::App app{"Random-direction Kiefer-Wolfowitz optimization with deterministic perturbations", "rdkw"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Build a perturbation cycle and check its cycle properties");
  verify->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::size_t verify_p = 10;
  std::string verify_source = "circulant";
  std::string dump;
  verify->add_option("--p", verify_p, "Dimension")->capture_default_str();
  verify->add_option("--source", verify_source, "circulant | hadamard")->capture_default_str();
  verify->add_option("--dump", dump, "Write the direction matrix as CSV, one column per line");

  auto* run_cmd = app.add_subcommand("run", "Run one optimization and report its NMSE");
  run_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  ExperimentFlags run_flags;
  run_flags.attach(run_cmd);
  std::string trajectory;
  run_cmd->add_option("--trajectory", trajectory, "Write n,||theta_n - theta*||^2 as CSV");

  auto* bench_cmd = app.add_subcommand("bench", "Replicated NMSE comparison");
  bench_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  ExperimentFlags bench_flags;
  bench_flags.attach(bench_cmd);
  BenchFlags bench;
  bench.table_opt = bench_cmd->add_option("--table", bench.table, "Comparison table protocol (1-4)");
  bench_cmd->add_option("--reps", bench.reps, "Replications per algorithm")->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = all cores)")->capture_default_str();
  bench_cmd->add_option("--csv", bench.csv, "Write per-replication results as CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "run with --help for usage\n";
    return kUsage;
  }

  try {
    if (verify->parsed()) {
      return cmd_verify(verify_p, verify_source, dump, out, err);
    }
    if (run_cmd->parsed()) {
      return cmd_run(run_flags, trajectory, out, err);
    }
    return cmd_bench(bench_flags, bench, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rdkw::cli
