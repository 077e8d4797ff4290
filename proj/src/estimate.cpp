#include "rdkw/estimate.hpp"

#include <cmath>
#include <string>

#include "rdkw/error.hpp"

namespace rdkw {
namespace {

void check_inputs(double delta, const Eigen::Ref<const Eigen::VectorXd>& d) {
  if (!(delta > 0.0)) {
    throw InvalidSensitivity("sensitivity delta must be > 0, got " + std::to_string(delta));
  }
  if (!std::isfinite(delta) || !d.allFinite()) {
    throw EstimationError("non-finite direction or sensitivity");
  }
}

void check_measurement(double y, const char* name) {
  if (!std::isfinite(y)) {
    throw EstimationError(std::string("non-finite measurement ") + name + " = " + std::to_string(y));
  }
}

}  // namespace

std::string_view to_string(EstimatorKind kind) {
  return kind == EstimatorKind::TwoSided ? "two-sided" : "one-sided";
}

void two_sided_estimate(double y_plus, double y_minus, const Eigen::Ref<const Eigen::VectorXd>& d, double delta,
                        Eigen::Ref<Eigen::VectorXd> out) {
  check_inputs(delta, d);
  check_measurement(y_plus, "y+");
  check_measurement(y_minus, "y-");
  out = ((y_plus - y_minus) / (2.0 * delta)) * d;
}

void one_sided_estimate(double y_plus, const Eigen::Ref<const Eigen::VectorXd>& d, double delta,
                        Eigen::Ref<Eigen::VectorXd> out) {
  check_inputs(delta, d);
  check_measurement(y_plus, "y+");
  out = (y_plus / delta) * d;
}

Eigen::VectorXd two_sided_estimate(double y_plus, double y_minus, const Eigen::Ref<const Eigen::VectorXd>& d,
                                   double delta) {
  Eigen::VectorXd g(d.size());
  two_sided_estimate(y_plus, y_minus, d, delta, g);
  return g;
}

Eigen::VectorXd one_sided_estimate(double y_plus, const Eigen::Ref<const Eigen::VectorXd>& d, double delta) {
  Eigen::VectorXd g(d.size());
  one_sided_estimate(y_plus, d, delta, g);
  return g;
}

}  // namespace rdkw
