#include "rdkw/schedule.hpp"

#include <cmath>
#include <limits>

namespace rdkw {

StepSizes step_sizes(const StepSchedule& s, std::uint64_t n) {
  const double k = static_cast<double>(n);
  return {s.a_scale / std::pow(k + s.B + 1.0, s.alpha), s.c / std::pow(k + 1.0, s.gamma)};
}

std::string A2Verdict::message() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) {
      out += "; ";
    }
    out += v;
  }
  return out;
}

A2Verdict validate_a2(const StepSchedule& s) {
  A2Verdict verdict;
  auto require = [&verdict](bool holds, const char* name) {
    if (!holds) {
      verdict.ok = false;
      verdict.violations.emplace_back(name);
    }
  };
  require(s.a_scale > 0.0, a2::kPositiveScale);
  require(s.c > 0.0, a2::kPositiveC);
  require(s.B >= 0.0, a2::kNonNegativeB);
  require(s.alpha > 0.0, a2::kStepVanishes);
  require(s.gamma > 0.0, a2::kSensitivityVanishes);
  require(s.alpha <= 1.0, a2::kStepSumDiverges);
  require(2.0 * (s.alpha - s.gamma) > 1.0, a2::kRatioSquareSummable);
  return verdict;
}

double ratio_square_sum_bound(const StepSchedule& s) {
  // (a_n/delta_n)^2 = (a_scale/c)^2 (n+1)^{2 gamma} / (n+B+1)^{2 alpha}
  //                <= (a_scale/c)^2 (n+1)^{-q},  q = 2(alpha - gamma), since B >= 0.
  const double q = 2.0 * (s.alpha - s.gamma);
  if (!(q > 1.0) || s.B < 0.0 || !(s.c > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  const double scale = (s.a_scale / s.c) * (s.a_scale / s.c);
  // sum_{k>=1} k^{-q} <= 1 + 1/(q - 1)
  return scale * (1.0 + 1.0 / (q - 1.0));
}

}  // namespace rdkw
