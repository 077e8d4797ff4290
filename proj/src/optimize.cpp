#include "rdkw/optimize.hpp"

#include <string>
#include <utility>

#include "rdkw/error.hpp"

namespace rdkw {

std::string_view to_string(PerturbationSource::Kind kind) {
  switch (kind) {
    case PerturbationSource::Kind::Circulant:
      return "circulant";
    case PerturbationSource::Kind::Hadamard:
      return "hadamard";
    case PerturbationSource::Kind::Bernoulli:
      return "bernoulli";
  }
  return "unknown";
}

namespace {

std::variant<PerturbationCycle, BernoulliGenerator> make_source(const PerturbationSource& source,
                                                                 std::size_t dimension) {
  switch (source.kind) {
    case PerturbationSource::Kind::Circulant:
      return build_circulant_cycle({dimension});
    case PerturbationSource::Kind::Hadamard:
      return build_hadamard_cycle(dimension);
    case PerturbationSource::Kind::Bernoulli:
      break;
  }
  return BernoulliGenerator(dimension, source.seed);
}

}  // namespace

DirectionStream::DirectionStream(const PerturbationSource& source, std::size_t dimension)
    : impl_(make_source(source, dimension)) {}

void DirectionStream::next(Eigen::Ref<Eigen::VectorXd> out) {
  if (auto* cycle = std::get_if<PerturbationCycle>(&impl_)) {
    cycle->next_direction(out);
  } else {
    std::get<BernoulliGenerator>(impl_).bernoulli_direction(out);
  }
}

std::size_t DirectionStream::period() const {
  if (const auto* cycle = std::get_if<PerturbationCycle>(&impl_)) {
    return cycle->cycle_length();
  }
  return 0;
}

std::uint64_t iteration_budget(EstimatorKind kind, std::uint64_t simulation_budget) {
  return simulation_budget / static_cast<std::uint64_t>(measurements_per_estimate(kind));
}

Eigen::VectorXd initial_theta(const OptimizerConfig& config) {
  if (config.theta0.size() == 0) {
    return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(config.dimension));
  }
  return config.theta0;
}

StepStatus single_step(OptimizerState& state, const Eigen::Ref<const Eigen::VectorXd>& direction, double a,
                       double delta, NoisyObjective& objective, EstimatorKind kind, std::uint64_t budget) {
  const auto cost = static_cast<std::uint64_t>(measurements_per_estimate(kind));
  if (state.simulations_used + cost > budget) {
    return StepStatus::BudgetExhausted;
  }
  if (!(delta > 0.0)) {
    throw InvalidSensitivity("single_step: delta must be > 0");
  }

  Eigen::VectorXd probe = state.theta + delta * direction;
  const double y_plus = objective.evaluate(probe);
  double y_minus = 0.0;
  if (kind == EstimatorKind::TwoSided) {
    probe = state.theta - delta * direction;
    y_minus = objective.evaluate(probe);
  }
  state.simulations_used += cost;

  Eigen::VectorXd gradient(direction.size());
  try {
    if (kind == EstimatorKind::TwoSided) {
      two_sided_estimate(y_plus, y_minus, direction, delta, gradient);
    } else {
      one_sided_estimate(y_plus, direction, delta, gradient);
    }
  } catch (const EstimationError& e) {
    state.diagnostic = "iteration " + std::to_string(state.iteration) + ": " + e.what();
    return StepStatus::Diverged;
  }

  Eigen::VectorXd next = state.theta - a * gradient;
  if (!next.allFinite()) {
    state.diagnostic = "iteration " + std::to_string(state.iteration) + ": non-finite iterate";
    return StepStatus::Diverged;
  }
  state.theta = std::move(next);
  ++state.iteration;
  return StepStatus::Advanced;
}

RunResult run(const OptimizerConfig& config, NoisyObjective& objective) {
  const std::size_t p = config.dimension;
  if (p == 0) {
    throw ConfigError("optimizer dimension must be >= 1");
  }
  if (objective.dimension() != p) {
    throw ConfigError("objective dimension " + std::to_string(objective.dimension()) +
                      " does not match optimizer dimension " + std::to_string(p));
  }
  const auto cost = static_cast<std::uint64_t>(measurements_per_estimate(config.estimator));
  if (config.simulation_budget < cost) {
    throw ConfigError("simulation budget " + std::to_string(config.simulation_budget) + " is below the " +
                      std::to_string(cost) + " evaluation(s) one " + std::string(to_string(config.estimator)) +
                      " iteration needs");
  }

  OptimizerState state;
  state.theta = initial_theta(config);
  if (static_cast<std::size_t>(state.theta.size()) != p) {
    throw ConfigError("theta0 has " + std::to_string(state.theta.size()) + " entries, expected " +
                      std::to_string(p));
  }
  if (!state.theta.allFinite()) {
    throw ConfigError("theta0 must be finite");
  }
  if (config.record_trajectory) {
    state.trajectory.push_back({0, state.theta});
  }

  DirectionStream directions(config.source, p);
  Eigen::VectorXd d(static_cast<Eigen::Index>(p));
  const std::uint64_t n_end = iteration_budget(config.estimator, config.simulation_budget);
  bool diverged = false;

  for (std::uint64_t n = 0; n < n_end; ++n) {
    directions.next(d);
    const StepSizes gains = step_sizes(config.schedule, n);
    if (config.observer) {
      config.observer({n, &d, gains.a, gains.delta});
    }
    const StepStatus status = single_step(state, d, gains.a, gains.delta, objective, config.estimator,
                                          config.simulation_budget);
    if (status == StepStatus::Diverged) {
      diverged = true;
      break;
    }
    if (status == StepStatus::BudgetExhausted) {
      break;
    }
    if (config.record_trajectory) {
      state.trajectory.push_back({state.iteration, state.theta});
    }
  }

  RunResult result;
  result.theta_end = std::move(state.theta);
  result.iterations = state.iteration;
  result.simulations_used = state.simulations_used;
  result.diverged = diverged;
  result.diagnostic = std::move(state.diagnostic);
  result.trajectory = std::move(state.trajectory);
  return result;
}

}  // namespace rdkw
