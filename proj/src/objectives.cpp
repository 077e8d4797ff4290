#include "rdkw/objectives.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "rdkw/error.hpp"

namespace rdkw {
namespace {

void require_dimension(const Eigen::MatrixXd& a, const Eigen::VectorXd& theta, const char* what) {
  if (a.rows() != a.cols() || a.cols() != theta.size()) {
    throw InvalidDimension(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + ", theta has " + std::to_string(theta.size()) +
                           " entries");
  }
}

}  // namespace

Eigen::MatrixXd benchmark_matrix(std::size_t p) {
  if (p == 0) {
    throw InvalidDimension("benchmark matrix: dimension must be >= 1");
  }
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a.triangularView<Eigen::Upper>().setConstant(1.0 / static_cast<double>(p));
  return a;
}

QuadraticSpec benchmark_quadratic(std::size_t p) {
  return {benchmark_matrix(p), Eigen::VectorXd::Ones(static_cast<Eigen::Index>(p))};
}

FourthOrderSpec benchmark_fourth_order(std::size_t p) { return {benchmark_matrix(p)}; }

double quadratic_value(const QuadraticSpec& spec, const Eigen::VectorXd& theta) {
  require_dimension(spec.A, theta, "quadratic");
  if (spec.b.size() != theta.size()) {
    throw InvalidDimension("quadratic: b and theta sizes differ");
  }
  return theta.dot(spec.A * theta) + spec.b.dot(theta);
}

Eigen::VectorXd quadratic_gradient(const QuadraticSpec& spec, const Eigen::VectorXd& theta) {
  require_dimension(spec.A, theta, "quadratic");
  return (spec.A + spec.A.transpose()) * theta + spec.b;
}

Eigen::VectorXd quadratic_minimizer(const QuadraticSpec& spec) {
  const Eigen::MatrixXd sym = spec.A + spec.A.transpose();
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sym);
  if (!qr.isInvertible()) {
    throw ConfigError("quadratic has no unique stationary point (A + A^T is singular)");
  }
  return qr.solve(-spec.b);
}

double fourth_order_value(const FourthOrderSpec& spec, const Eigen::VectorXd& theta) {
  require_dimension(spec.A, theta, "fourth-order");
  const Eigen::ArrayXd x = (spec.A * theta).array();
  const Eigen::ArrayXd x2 = x.square();
  return x2.sum() + 0.1 * (x2 * x).sum() + 0.01 * (x2 * x2).sum();
}

Eigen::VectorXd fourth_order_gradient(const FourthOrderSpec& spec, const Eigen::VectorXd& theta) {
  require_dimension(spec.A, theta, "fourth-order");
  const Eigen::ArrayXd x = (spec.A * theta).array();
  const Eigen::VectorXd inner = (2.0 * x + 0.3 * x.square() + 0.04 * x.cube()).matrix();
  return spec.A.transpose() * inner;
}

NoisyObjective::NoisyObjective(std::size_t dimension, LossFunction loss, double sigma, std::uint64_t seed,
                               std::optional<Eigen::VectorXd> theta_star)
    : dimension_(dimension), loss_(std::move(loss)), sigma_(sigma), engine_(seed), theta_star_(std::move(theta_star)) {
  if (dimension == 0) {
    throw InvalidDimension("objective dimension must be >= 1");
  }
  if (!loss_) {
    throw ConfigError("objective needs a loss function");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("noise sigma must be finite and >= 0");
  }
  if (theta_star_ && static_cast<std::size_t>(theta_star_->size()) != dimension) {
    throw InvalidDimension("theta_star dimension does not match objective dimension");
  }
}

double NoisyObjective::evaluate(const Eigen::VectorXd& theta) {
  if (static_cast<std::size_t>(theta.size()) != dimension_) {
    throw InvalidDimension("evaluate: theta has " + std::to_string(theta.size()) + " entries, expected " +
                           std::to_string(dimension_));
  }
  ++evaluations_;
  const double value = loss_(theta);
  if (sigma_ == 0.0) {
    return value;
  }
  double noise = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    noise += theta[i] * normal_(engine_);
  }
  noise += normal_(engine_);
  return value + sigma_ * noise;
}

std::string_view to_string(ObjectiveKind kind) {
  return kind == ObjectiveKind::Quadratic ? "quadratic" : "fourth-order";
}

std::optional<ObjectiveKind> parse_objective_kind(std::string_view name) {
  if (name == "quadratic") {
    return ObjectiveKind::Quadratic;
  }
  if (name == "fourth-order" || name == "fourth_order" || name == "quartic") {
    return ObjectiveKind::FourthOrder;
  }
  return std::nullopt;
}

NoisyObjective make_benchmark_objective(ObjectiveKind kind, std::size_t p, double sigma, std::uint64_t seed) {
  if (kind == ObjectiveKind::Quadratic) {
    QuadraticSpec spec = benchmark_quadratic(p);
    Eigen::VectorXd star = quadratic_minimizer(spec);
    return NoisyObjective(
        p, [spec = std::move(spec)](const Eigen::VectorXd& t) { return quadratic_value(spec, t); }, sigma, seed,
        std::move(star));
  }
  FourthOrderSpec spec = benchmark_fourth_order(p);
  return NoisyObjective(
      p, [spec = std::move(spec)](const Eigen::VectorXd& t) { return fourth_order_value(spec, t); }, sigma, seed,
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p)));
}

double nmse(const Eigen::VectorXd& theta_end, const Eigen::VectorXd& theta0, const Eigen::VectorXd& theta_star) {
  if (theta_end.size() != theta_star.size() || theta0.size() != theta_star.size()) {
    throw InvalidDimension("nmse: vector sizes differ");
  }
  const double denominator = (theta0 - theta_star).squaredNorm();
  if (denominator == 0.0) {
    throw UndefinedMetric("nmse undefined: theta0 equals theta_star");
  }
  return (theta_end - theta_star).squaredNorm() / denominator;
}

}  // namespace rdkw
