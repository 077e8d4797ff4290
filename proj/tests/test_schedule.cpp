#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "rdkw/schedule.hpp"

using namespace rdkw;

namespace {

bool mentions(const A2Verdict& v, const std::string& name) {
  return std::find(v.violations.begin(), v.violations.end(), name) != v.violations.end();
}

}  // namespace

TEST_CASE("step sizes") {
  StepSchedule s;
  s.alpha = 0.602;
  s.B = 10.0;
  s.c = 0.1;
  s.gamma = 0.101;
  const StepSizes first = step_sizes(s, 0);
  // 11^-0.602
  CHECK(std::abs(first.a - 0.23609218065474105) < 1e-12);
  CHECK(first.delta == 0.1);

  double last_a = first.a;
  double last_delta = first.delta;
  for (std::uint64_t n = 1; n < 5000; ++n) {
    const StepSizes g = step_sizes(s, n);
    CHECK(g.a > 0.0);
    CHECK(g.delta > 0.0);
    CHECK(g.a < last_a);
    CHECK(g.delta < last_delta);
    last_a = g.a;
    last_delta = g.delta;
  }
}

TEST_CASE("A2 validation") {
  SUBCASE("benchmark exponents pass") {
    StepSchedule s;
    s.alpha = 0.602;
    s.gamma = 0.101;
    const A2Verdict v = validate_a2(s);
    CHECK(v.ok);
    CHECK(v.violations.empty());
  }
  SUBCASE("gamma = 0 only fails the vanishing-delta condition") {
    StepSchedule s;
    s.alpha = 1.0;
    s.gamma = 0.0;
    const A2Verdict v = validate_a2(s);
    CHECK_FALSE(v.ok);
    REQUIRE(v.violations.size() == 1);
    CHECK(v.violations[0] == a2::kSensitivityVanishes);
  }
  SUBCASE("2(alpha - gamma) < 1") {
    StepSchedule s;
    s.alpha = 0.6;
    s.gamma = 0.2;
    const A2Verdict v = validate_a2(s);
    CHECK_FALSE(v.ok);
    CHECK(mentions(v, a2::kRatioSquareSummable));
    CHECK(v.message().find("2(alpha-gamma)") != std::string::npos);
  }
  SUBCASE("every violation is listed") {
    StepSchedule s;
    s.alpha = 1.5;
    s.gamma = -0.1;
    s.c = 0.0;
    s.B = -1.0;
    const A2Verdict v = validate_a2(s);
    CHECK(mentions(v, a2::kStepSumDiverges));
    CHECK(mentions(v, a2::kSensitivityVanishes));
    CHECK(mentions(v, a2::kPositiveC));
    CHECK(mentions(v, a2::kNonNegativeB));
    CHECK_FALSE(mentions(v, a2::kRatioSquareSummable));
  }
}

TEST_CASE("partial sums of (a_n/delta_n)^2 stay under the analytic bound") {
  StepSchedule s;
  s.alpha = 0.602;
  s.gamma = 0.101;
  s.B = 100.0;
  s.c = 0.1;
  const double bound = ratio_square_sum_bound(s);
  REQUIRE(std::isfinite(bound));
  double partial = 0.0;
  for (std::uint64_t n = 0; n < 1000000; ++n) {
    const StepSizes g = step_sizes(s, n);
    const double next = partial + (g.a / g.delta) * (g.a / g.delta);
    REQUIRE(next >= partial);
    partial = next;
  }
  CHECK(partial <= bound);

  StepSchedule bad = s;
  bad.gamma = 0.2;
  bad.alpha = 0.6;
  CHECK(std::isinf(ratio_square_sum_bound(bad)));
}

TEST_CASE("a_{n+M} / a_n tends to one") {
  StepSchedule s;
  s.alpha = 0.602;
  s.B = 0.0;
  const std::uint64_t n = 100000;
  const std::uint64_t m = 20;
  const double ratio = step_sizes(s, n + m).a / step_sizes(s, n).a;
  CHECK(std::abs(ratio - 1.0) <= 10.0 * static_cast<double>(m) / static_cast<double>(n));
}
