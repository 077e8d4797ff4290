#pragma once

// Finite-difference-along-a-direction gradient estimators. Both are pure
// functions of already-observed measurements; they never touch the objective.

#include <string_view>

#include <Eigen/Dense>

namespace rdkw {

enum class EstimatorKind { TwoSided, OneSided };

std::string_view to_string(EstimatorKind kind);

/// Objective evaluations consumed by one estimate of this kind.
constexpr int measurements_per_estimate(EstimatorKind kind) {
  return kind == EstimatorKind::TwoSided ? 2 : 1;
}

/// ((y_plus - y_minus) / (2 delta)) d.
/// Throws InvalidSensitivity for delta <= 0 and EstimationError for
/// non-finite inputs.
Eigen::VectorXd two_sided_estimate(double y_plus, double y_minus, const Eigen::Ref<const Eigen::VectorXd>& d,
                                   double delta);

/// (y_plus / delta) d.
Eigen::VectorXd one_sided_estimate(double y_plus, const Eigen::Ref<const Eigen::VectorXd>& d, double delta);

/// Non-allocating variants used inside the optimizer loop.
void two_sided_estimate(double y_plus, double y_minus, const Eigen::Ref<const Eigen::VectorXd>& d, double delta,
                        Eigen::Ref<Eigen::VectorXd> out);
void one_sided_estimate(double y_plus, const Eigen::Ref<const Eigen::VectorXd>& d, double delta,
                        Eigen::Ref<Eigen::VectorXd> out);

}  // namespace rdkw
