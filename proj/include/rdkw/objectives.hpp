#pragma once

// Benchmark losses, the additive noise model and the NMSE metric.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace rdkw {

using LossFunction = std::function<double(const Eigen::VectorXd&)>;

/// J(theta) = theta^T A theta + b^T theta.
struct QuadraticSpec {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

/// J(theta) = theta^T A^T A theta + 0.1 sum_j (A theta)_j^3 + 0.01 sum_j (A theta)_j^4.
struct FourthOrderSpec {
  Eigen::MatrixXd A;
};

/// p x p matrix whose scaled version p*A is upper triangular with ones on
/// and above the diagonal.
Eigen::MatrixXd benchmark_matrix(std::size_t p);
QuadraticSpec benchmark_quadratic(std::size_t p);
FourthOrderSpec benchmark_fourth_order(std::size_t p);

double quadratic_value(const QuadraticSpec& spec, const Eigen::VectorXd& theta);
Eigen::VectorXd quadratic_gradient(const QuadraticSpec& spec, const Eigen::VectorXd& theta);
/// Solves (A + A^T) theta = -b. Throws ConfigError if the system is singular.
Eigen::VectorXd quadratic_minimizer(const QuadraticSpec& spec);

double fourth_order_value(const FourthOrderSpec& spec, const Eigen::VectorXd& theta);
Eigen::VectorXd fourth_order_gradient(const FourthOrderSpec& spec, const Eigen::VectorXd& theta);

/// A loss observed through additive noise [theta^T, 1] z, z ~ N(0, sigma^2 I_{p+1}).
///
/// Each evaluate() draws a fresh z and bumps the evaluation counter. With
/// sigma == 0 the loss value is returned unchanged and no draws are made.
/// Owns its generator, so one instance belongs to one run.
class NoisyObjective {
 public:
  NoisyObjective(std::size_t dimension, LossFunction loss, double sigma, std::uint64_t seed,
                 std::optional<Eigen::VectorXd> theta_star = std::nullopt);

  double evaluate(const Eigen::VectorXd& theta);
  /// Noise-free loss; does not count as an evaluation.
  double loss(const Eigen::VectorXd& theta) const { return loss_(theta); }

  std::size_t dimension() const { return dimension_; }
  double sigma() const { return sigma_; }
  std::uint64_t evaluations() const { return evaluations_; }
  const std::optional<Eigen::VectorXd>& theta_star() const { return theta_star_; }

 private:
  std::size_t dimension_;
  LossFunction loss_;
  double sigma_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::optional<Eigen::VectorXd> theta_star_;
  std::uint64_t evaluations_ = 0;
};

enum class ObjectiveKind { Quadratic, FourthOrder };

std::string_view to_string(ObjectiveKind kind);
/// Accepts "quadratic" and "fourth-order" (also "fourth_order", "quartic").
std::optional<ObjectiveKind> parse_objective_kind(std::string_view name);

/// Benchmark instance of the given kind with its known minimizer attached
/// (closed-form solve for the quadratic, the origin for the fourth-order loss).
NoisyObjective make_benchmark_objective(ObjectiveKind kind, std::size_t p, double sigma, std::uint64_t seed);

/// ||theta_end - theta_star||^2 / ||theta0 - theta_star||^2.
/// Throws UndefinedMetric when theta0 == theta_star.
double nmse(const Eigen::VectorXd& theta_end, const Eigen::VectorXd& theta0, const Eigen::VectorXd& theta_star);

}  // namespace rdkw
