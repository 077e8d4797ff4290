#pragma once

// theta_{n+1} = theta_n - a_n * grad_estimate(theta_n), run until the
// simulation budget (objective evaluations) is spent.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rdkw/estimate.hpp"
#include "rdkw/objectives.hpp"
#include "rdkw/perturb.hpp"
#include "rdkw/schedule.hpp"

namespace rdkw {

struct PerturbationSource {
  enum class Kind { Circulant, Hadamard, Bernoulli };

  Kind kind = Kind::Circulant;
  std::uint64_t seed = 0;  ///< used by Bernoulli only

  static PerturbationSource circulant() { return {Kind::Circulant, 0}; }
  static PerturbationSource hadamard() { return {Kind::Hadamard, 0}; }
  static PerturbationSource bernoulli(std::uint64_t seed) { return {Kind::Bernoulli, seed}; }

  bool deterministic() const { return kind != Kind::Bernoulli; }
};

std::string_view to_string(PerturbationSource::Kind kind);

/// Directions from any source behind one interface. Deterministic sources
/// start at cursor 0.
class DirectionStream {
 public:
  DirectionStream(const PerturbationSource& source, std::size_t dimension);

  void next(Eigen::Ref<Eigen::VectorXd> out);
  /// Cycle length of a deterministic source, 0 for Bernoulli.
  std::size_t period() const;

 private:
  std::variant<PerturbationCycle, BernoulliGenerator> impl_;
};

struct IterationRecord {
  std::uint64_t n = 0;
  const Eigen::VectorXd* direction = nullptr;
  double a = 0.0;
  double delta = 0.0;
};

struct OptimizerConfig {
  std::size_t dimension = 10;
  EstimatorKind estimator = EstimatorKind::TwoSided;
  PerturbationSource source = PerturbationSource::circulant();
  StepSchedule schedule;
  std::uint64_t simulation_budget = 2000;
  /// Empty means the all-ones vector.
  Eigen::VectorXd theta0;
  bool record_trajectory = false;
  /// Called before each update with the direction and gains about to be used.
  std::function<void(const IterationRecord&)> observer;
};

/// Number of iterations a budget buys: budget/2 two-sided, budget one-sided.
std::uint64_t iteration_budget(EstimatorKind kind, std::uint64_t simulation_budget);

/// Resolves the starting point (all ones when config.theta0 is empty).
Eigen::VectorXd initial_theta(const OptimizerConfig& config);

struct TrajectoryPoint {
  std::uint64_t n = 0;
  Eigen::VectorXd theta;
};

struct OptimizerState {
  Eigen::VectorXd theta;
  std::uint64_t iteration = 0;
  std::uint64_t simulations_used = 0;
  std::vector<TrajectoryPoint> trajectory;
  std::string diagnostic;
};

enum class StepStatus { Advanced, BudgetExhausted, Diverged };

/// One update. Refused (state untouched) when the measurements it needs would
/// exceed the budget. A non-finite measurement or iterate leaves theta at its
/// last finite value, fills state.diagnostic and returns Diverged.
StepStatus single_step(OptimizerState& state, const Eigen::Ref<const Eigen::VectorXd>& direction, double a,
                       double delta, NoisyObjective& objective, EstimatorKind kind, std::uint64_t budget);

struct RunResult {
  Eigen::VectorXd theta_end;
  std::uint64_t iterations = 0;
  std::uint64_t simulations_used = 0;
  bool diverged = false;
  std::string diagnostic;
  std::vector<TrajectoryPoint> trajectory;
};

/// Throws ConfigError for an invalid config or a dimension mismatch with the
/// objective. Schedule A2 validation is the caller's decision.
RunResult run(const OptimizerConfig& config, NoisyObjective& objective);

}  // namespace rdkw
