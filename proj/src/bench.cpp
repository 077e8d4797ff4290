#include "rdkw/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rdkw/error.hpp"

namespace rdkw {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

std::string full_precision(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

void finalize(AlgorithmResult& result) {
  std::vector<double> finite;
  finite.reserve(result.replications.size());
  result.diverged = 0;
  for (const auto& rec : result.replications) {
    if (rec.diverged) {
      ++result.diverged;
    } else {
      finite.push_back(rec.nmse);
    }
  }
  const SampleStats stats = sample_stats(finite);
  result.mean = stats.mean;
  result.std = stats.std;
  result.used = stats.count;
  result.single_sample = stats.count == 1;
}

ReplicationRecord run_replication(const ExperimentPlan& plan, Algorithm algorithm, std::uint64_t replication) {
  const std::uint64_t seed = replication_seed(plan.base_seed, replication);
  OptimizerConfig config;
  config.dimension = plan.dimension;
  config.estimator = estimator_of(algorithm);
  switch (source_of(algorithm)) {
    case PerturbationSource::Kind::Circulant:
      config.source = PerturbationSource::circulant();
      break;
    case PerturbationSource::Kind::Hadamard:
      config.source = PerturbationSource::hadamard();
      break;
    case PerturbationSource::Kind::Bernoulli:
      config.source = PerturbationSource::bernoulli(direction_seed(plan.base_seed, replication));
      break;
  }
  config.simulation_budget = plan.budget;
  config.schedule = plan.schedule.resolve(iteration_budget(config.estimator, plan.budget));
  config.theta0 = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(plan.dimension), plan.theta0_fill);

  NoisyObjective objective = make_benchmark_objective(plan.objective, plan.dimension, plan.sigma, seed);
  const RunResult outcome = run(config, objective);

  ReplicationRecord rec;
  rec.replication = replication;
  rec.seed = seed;
  rec.diverged = outcome.diverged;
  rec.nmse = nmse(outcome.theta_end, config.theta0, *objective.theta_star());
  if (!std::isfinite(rec.nmse)) {
    rec.diverged = true;
  }
  return rec;
}

void validate_plan(const ExperimentPlan& plan) {
  if (plan.algorithms.empty()) {
    throw ConfigError("experiment plan lists no algorithms");
  }
  if (plan.replications == 0) {
    throw ConfigError("replications must be >= 1");
  }
  if (plan.dimension == 0) {
    throw ConfigError("dimension must be >= 1");
  }
  if (!(plan.sigma >= 0.0) || !std::isfinite(plan.sigma)) {
    throw ConfigError("sigma must be finite and >= 0");
  }
  for (Algorithm algorithm : plan.algorithms) {
    const EstimatorKind kind = estimator_of(algorithm);
    const auto needed = static_cast<std::uint64_t>(measurements_per_estimate(kind));
    if (plan.budget < needed) {
      throw ConfigError("budget " + std::to_string(plan.budget) + " too small for " +
                        std::string(to_string(algorithm)));
    }
    if (!plan.force) {
      const A2Verdict verdict = validate_a2(plan.schedule.resolve(iteration_budget(kind, plan.budget)));
      if (!verdict.ok) {
        throw ConfigError("step-size schedule violates A2: " + verdict.message());
      }
    }
  }
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::DSPKW_2C:
      return "DSPKW-2C";
    case Algorithm::RDKW_2H:
      return "RDKW-2H";
    case Algorithm::RDKW_2R:
      return "RDKW-2R";
    case Algorithm::DSPKW_1C:
      return "DSPKW-1C";
    case Algorithm::RDKW_1H:
      return "RDKW-1H";
    case Algorithm::RDKW_1R:
      return "RDKW-1R";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  const std::string wanted = lowercase(name);
  for (Algorithm algorithm : kAllAlgorithms) {
    if (lowercase(to_string(algorithm)) == wanted) {
      return algorithm;
    }
  }
  return std::nullopt;
}

EstimatorKind estimator_of(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::DSPKW_2C:
    case Algorithm::RDKW_2H:
    case Algorithm::RDKW_2R:
      return EstimatorKind::TwoSided;
    default:
      return EstimatorKind::OneSided;
  }
}

PerturbationSource::Kind source_of(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::DSPKW_2C:
    case Algorithm::DSPKW_1C:
      return PerturbationSource::Kind::Circulant;
    case Algorithm::RDKW_2H:
    case Algorithm::RDKW_1H:
      return PerturbationSource::Kind::Hadamard;
    default:
      return PerturbationSource::Kind::Bernoulli;
  }
}

std::vector<Algorithm> algorithms_for(EstimatorKind kind) {
  if (kind == EstimatorKind::TwoSided) {
    return {Algorithm::RDKW_2R, Algorithm::RDKW_2H, Algorithm::DSPKW_2C};
  }
  return {Algorithm::RDKW_1R, Algorithm::RDKW_1H, Algorithm::DSPKW_1C};
}

StepSchedule ScheduleParams::resolve(std::uint64_t iterations) const {
  StepSchedule s;
  s.a_scale = a_scale;
  s.alpha = alpha;
  s.gamma = gamma;
  s.c = c;
  s.B = B.value_or(b_fraction * static_cast<double>(iterations));
  return s;
}

SampleStats sample_stats(std::span<const double> values) {
  SampleStats stats;
  stats.count = values.size();
  if (values.empty()) {
    stats.mean = std::numeric_limits<double>::quiet_NaN();
    stats.std = std::numeric_limits<double>::quiet_NaN();
    return stats;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  stats.mean = sum / static_cast<double>(values.size());
  if (values.size() == 1) {
    stats.std = 0.0;
    return stats;
  }
  double ss = 0.0;
  for (double v : values) {
    ss += (v - stats.mean) * (v - stats.mean);
  }
  stats.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return stats;
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t replication) { return base_seed + replication; }

std::uint64_t direction_seed(std::uint64_t base_seed, std::uint64_t replication) {
  return splitmix64(replication_seed(base_seed, replication) ^ 0xD1B54A32D192ED03ULL);
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  validate_plan(plan);

  const std::size_t n_alg = plan.algorithms.size();
  const std::size_t n_rep = plan.replications;
  const std::size_t n_tasks = n_alg * n_rep;
  // Slot i belongs to (algorithm i / n_rep, replication i % n_rep), so the
  // output order never depends on scheduling.
  std::vector<ReplicationRecord> slots(n_tasks);

  unsigned workers = plan.parallelism != 0 ? plan.parallelism : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_tasks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n_tasks; i = next++) {
      try {
        slots[i] = run_replication(plan, plan.algorithms[i / n_rep], i % n_rep);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next = n_tasks;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  ExperimentResult result;
  result.plan = plan;
  result.algorithms.reserve(n_alg);
  for (std::size_t a = 0; a < n_alg; ++a) {
    AlgorithmResult entry;
    entry.algorithm = plan.algorithms[a];
    entry.replications.assign(slots.begin() + static_cast<std::ptrdiff_t>(a * n_rep),
                              slots.begin() + static_cast<std::ptrdiff_t>((a + 1) * n_rep));
    finalize(entry);
    result.algorithms.push_back(std::move(entry));
  }
  return result;
}

bool divergence_dominated(const ExperimentResult& result) {
  return std::any_of(result.algorithms.begin(), result.algorithms.end(), [](const AlgorithmResult& a) {
    return 2 * a.diverged > a.replications.size();
  });
}

TablePreset table_preset(int table) {
  TablePreset preset;
  preset.table = table;
  switch (table) {
    case 1:
      preset.objective = ObjectiveKind::Quadratic;
      preset.estimator = EstimatorKind::TwoSided;
      preset.budget = 2000;
      preset.c = 1.0;
      preset.b_fraction = 1.0;
      break;
    case 2:
      preset.objective = ObjectiveKind::FourthOrder;
      preset.estimator = EstimatorKind::TwoSided;
      preset.budget = 10000;
      preset.c = 1.0;
      preset.b_fraction = 0.1;
      break;
    case 3:
      preset.objective = ObjectiveKind::Quadratic;
      preset.estimator = EstimatorKind::OneSided;
      preset.budget = 20000;
      preset.c = 1.0;
      preset.b_fraction = 1.0;
      break;
    case 4:
      preset.objective = ObjectiveKind::FourthOrder;
      preset.estimator = EstimatorKind::OneSided;
      preset.budget = 20000;
      preset.c = 0.1;
      preset.b_fraction = 1.0;
      break;
    default:
      throw ConfigError("unknown table " + std::to_string(table) + " (expected 1-4)");
  }
  return preset;
}

std::string format_scientific(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", value);
  return buf;
}

std::string format_table(const ExperimentResult& result) {
  const ExperimentPlan& plan = result.plan;
  std::ostringstream out;
  out << to_string(plan.objective) << " objective, sigma = " << plan.sigma << ", " << plan.budget
      << " simulations, " << plan.replications << " replications\n";
  out << "Method      NMSE (mean ± std)\n";
  for (const auto& a : result.algorithms) {
    std::string name(to_string(a.algorithm));
    name.resize(std::max<std::size_t>(name.size(), 10), ' ');
    out << name << "  " << format_scientific(a.mean) << " ± " << format_scientific(a.std);
    if (a.single_sample) {
      out << "  (single sample)";
    }
    if (a.diverged > 0) {
      out << "  (" << a.diverged << "/" << a.replications.size() << " diverged, excluded)";
    }
    out << '\n';
  }
  return out.str();
}

std::string_view csv_header() { return "algorithm,objective,sigma,budget,replication,seed,nmse,diverged"; }

void write_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  out << csv_header() << '\n';
  for (const auto& result : results) {
    const ExperimentPlan& plan = result.plan;
    for (const auto& a : result.algorithms) {
      for (const auto& rec : a.replications) {
        out << to_string(a.algorithm) << ',' << to_string(plan.objective) << ',' << full_precision(plan.sigma) << ','
            << plan.budget << ',' << rec.replication << ',' << rec.seed << ',' << full_precision(rec.nmse) << ','
            << (rec.diverged ? 1 : 0) << '\n';
      }
    }
  }
}

std::string to_csv(std::span<const ExperimentResult> results) {
  std::ostringstream out;
  write_csv(out, results);
  return out.str();
}

namespace {

double parse_double(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& field, std::size_t line) {
  if (field.empty() || !std::all_of(field.begin(), field.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ParseError("line " + std::to_string(line) + ": bad integer '" + field + "'");
  }
  return std::stoull(field);
}

}  // namespace

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line_no == 1) {
      if (line != csv_header()) {
        throw ParseError("unexpected CSV header: " + line);
      }
      continue;
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() != 8) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 8 fields, got " +
                       std::to_string(fields.size()));
    }
    CsvRow row;
    row.algorithm = fields[0];
    row.objective = fields[1];
    row.sigma = parse_double(fields[2], line_no);
    row.budget = parse_uint(fields[3], line_no);
    row.replication = parse_uint(fields[4], line_no);
    row.seed = parse_uint(fields[5], line_no);
    row.nmse = parse_double(fields[6], line_no);
    if (fields[7] != "0" && fields[7] != "1") {
      throw ParseError("line " + std::to_string(line_no) + ": diverged must be 0 or 1");
    }
    row.diverged = fields[7] == "1";
    rows.push_back(std::move(row));
  }
  if (line_no == 0) {
    throw ParseError("empty CSV");
  }
  return rows;
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryPoint> trajectory,
                          const Eigen::VectorXd& theta_star) {
  out << "n,sq_error\n";
  for (const auto& point : trajectory) {
    out << point.n << ',' << full_precision((point.theta - theta_star).squaredNorm()) << '\n';
  }
}

}  // namespace rdkw
