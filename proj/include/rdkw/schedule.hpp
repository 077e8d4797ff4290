#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rdkw {

/// Power-law gain sequences
///   a_n     = a_scale / (n + B + 1)^alpha
///   delta_n = c / (n + 1)^gamma
/// with n counted from zero.
struct StepSchedule {
  double a_scale = 1.0;
  double alpha = 0.602;
  double B = 0.0;
  double c = 0.1;
  double gamma = 0.101;
};

struct StepSizes {
  double a = 0.0;
  double delta = 0.0;
};

StepSizes step_sizes(const StepSchedule& schedule, std::uint64_t n);

/// Names of the conditions reported by validate_a2.
namespace a2 {
inline constexpr const char* kStepVanishes = "alpha>0 (a_n -> 0)";
inline constexpr const char* kSensitivityVanishes = "gamma>0 (delta_n -> 0)";
inline constexpr const char* kStepSumDiverges = "alpha<=1 (sum a_n = inf)";
inline constexpr const char* kRatioSquareSummable = "2(alpha-gamma)>1 (sum (a_n/delta_n)^2 < inf)";
inline constexpr const char* kPositiveScale = "a_scale>0";
inline constexpr const char* kPositiveC = "c>0";
inline constexpr const char* kNonNegativeB = "B>=0";
}  // namespace a2

struct A2Verdict {
  bool ok = true;
  std::vector<std::string> violations;

  /// Violations joined with "; ".
  std::string message() const;
};

/// Checks the step-size conditions through their exponent equivalents for
/// power laws. Every violated condition is listed, not just the first.
A2Verdict validate_a2(const StepSchedule& schedule);

/// Upper bound on sum_{n>=0} (a_n / delta_n)^2 for a schedule with
/// 2(alpha - gamma) > 1 (integral comparison). Infinity otherwise.
double ratio_square_sum_bound(const StepSchedule& schedule);

}  // namespace rdkw
