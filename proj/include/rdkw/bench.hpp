#pragma once

// Replicated NMSE comparison of the six estimator/perturbation pairings.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdkw/estimate.hpp"
#include "rdkw/objectives.hpp"
#include "rdkw/optimize.hpp"
#include "rdkw/schedule.hpp"

namespace rdkw {

enum class Algorithm { DSPKW_2C, RDKW_2H, RDKW_2R, DSPKW_1C, RDKW_1H, RDKW_1R };

inline constexpr std::array<Algorithm, 6> kAllAlgorithms = {Algorithm::DSPKW_2C, Algorithm::RDKW_2H,
                                                            Algorithm::RDKW_2R,  Algorithm::DSPKW_1C,
                                                            Algorithm::RDKW_1H,  Algorithm::RDKW_1R};

std::string_view to_string(Algorithm algorithm);
/// Case-insensitive ("dspkw-2c" and "DSPKW-2C" both parse).
std::optional<Algorithm> parse_algorithm(std::string_view name);
EstimatorKind estimator_of(Algorithm algorithm);
PerturbationSource::Kind source_of(Algorithm algorithm);
/// The three algorithms using the given estimator, in table order (R, H, C).
std::vector<Algorithm> algorithms_for(EstimatorKind kind);

/// Schedule parameters before the iteration count is known. When B is not
/// given explicitly it is b_fraction times the number of iterations.
struct ScheduleParams {
  double a_scale = 1.0;
  double alpha = 0.602;
  double gamma = 0.101;
  double c = 0.1;
  std::optional<double> B;
  double b_fraction = 0.1;

  StepSchedule resolve(std::uint64_t iterations) const;
};

struct ExperimentPlan {
  std::vector<Algorithm> algorithms;
  ObjectiveKind objective = ObjectiveKind::Quadratic;
  double sigma = 0.0;
  std::uint64_t budget = 2000;
  std::uint64_t replications = 100;
  std::uint64_t base_seed = 0;
  std::size_t dimension = 10;
  ScheduleParams schedule;
  double theta0_fill = 1.0;
  /// Run even when a resolved schedule fails validate_a2.
  bool force = false;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned parallelism = 0;
};

struct ReplicationRecord {
  std::uint64_t replication = 0;
  std::uint64_t seed = 0;
  double nmse = 0.0;
  bool diverged = false;
};

struct SampleStats {
  double mean = 0.0;
  double std = 0.0;  ///< sample (n - 1) standard deviation; 0 for a single sample
  std::size_t count = 0;
};

/// NaN mean/std for an empty sample.
SampleStats sample_stats(std::span<const double> values);

struct AlgorithmResult {
  Algorithm algorithm = Algorithm::DSPKW_2C;
  std::vector<ReplicationRecord> replications;  ///< ordered by replication index
  double mean = 0.0;                            ///< over non-diverged replications
  double std = 0.0;
  std::size_t used = 0;
  std::size_t diverged = 0;
  bool single_sample = false;
};

struct ExperimentResult {
  ExperimentPlan plan;
  std::vector<AlgorithmResult> algorithms;  ///< in plan order
};

/// Noise seed of replication r (shared by every algorithm).
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t replication);
/// Bernoulli direction seed of replication r, decorrelated from the noise seed.
std::uint64_t direction_seed(std::uint64_t base_seed, std::uint64_t replication);

/// Runs every (algorithm, replication) pair. Throws ConfigError for an
/// invalid plan or, unless plan.force, a schedule failing A2.
ExperimentResult run_experiment(const ExperimentPlan& plan);

/// True when more than half of some algorithm's replications diverged.
bool divergence_dominated(const ExperimentResult& result);

struct TablePreset {
  int table = 1;
  ObjectiveKind objective = ObjectiveKind::Quadratic;
  EstimatorKind estimator = EstimatorKind::TwoSided;
  std::uint64_t budget = 2000;
  double c = 1.0;
  double b_fraction = 1.0;
  std::array<double, 2> sigmas = {0.0, 0.01};
};

/// Protocol of comparison tables 1-4. Throws ConfigError for other numbers.
TablePreset table_preset(int table);

/// "2.474e-08": four significant digits.
std::string format_scientific(double value);

/// Human-readable table, one row per algorithm.
std::string format_table(const ExperimentResult& result);

struct CsvRow {
  std::string algorithm;
  std::string objective;
  double sigma = 0.0;
  std::uint64_t budget = 0;
  std::uint64_t replication = 0;
  std::uint64_t seed = 0;
  double nmse = 0.0;
  bool diverged = false;
};

std::string_view csv_header();
void write_csv(std::ostream& out, std::span<const ExperimentResult> results);
std::string to_csv(std::span<const ExperimentResult> results);
/// Inverse of to_csv. Throws ParseError on malformed input.
std::vector<CsvRow> parse_csv(std::string_view text);

/// "n,sq_error" rows with sq_error = ||theta_n - theta_star||^2.
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryPoint> trajectory,
                          const Eigen::VectorXd& theta_star);

}  // namespace rdkw
