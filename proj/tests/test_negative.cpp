#include <doctest.h>

#include <cmath>
#include <random>

#include "expfunc/negative_ladder.hpp"
#include "expfunc/smoothing_spline.hpp"

using namespace expfunc;
using doctest::Approx;

TEST_CASE("smoothing spline") {
  std::vector<double> x, line, wave, noisy, se;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int i = 0; i <= 60; ++i) {
    const double xi = 0.1 * i;
    x.push_back(xi);
    line.push_back(2.0 - 0.5 * xi);
    wave.push_back(std::sin(xi));
    noisy.push_back(std::sin(xi) + noise(rng));
    se.push_back(0.01);
  }
  SUBCASE("linear data are reproduced with their slope") {
    const SplineFit f = fit_smoothing_spline(x, line);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(f.fitted[i] == Approx(line[i]).epsilon(1e-8));
      CHECK(f.derivative[i] == Approx(-0.5).epsilon(1e-6));
      CHECK(f.derivative_std[i] == 0.0);
    }
  }
  SUBCASE("smooth data: derivative close to the analytic one") {
    const SplineFit f = fit_smoothing_spline(x, wave);
    for (std::size_t i = 5; i + 5 < x.size(); ++i) CHECK(f.derivative[i] == Approx(std::cos(x[i])).epsilon(1e-3));
  }
  SUBCASE("noisy data: cross-validated smoothing and propagated errors") {
    const SplineFit f = fit_smoothing_spline(x, noisy, se);
    CHECK(f.lambda > 0.0);
    for (std::size_t i = 5; i + 5 < x.size(); ++i) {
      CHECK(std::abs(f.derivative[i] - std::cos(x[i])) < 0.1);
      CHECK(f.derivative_std[i] > 0.0);
    }
    // Doubling the data errors doubles the derivative SD at fixed lambda.
    std::vector<double> se2(se.size(), 0.02);
    const SplineFit a = fit_smoothing_spline(x, noisy, se, f.lambda);
    const SplineFit b = fit_smoothing_spline(x, noisy, se2, f.lambda);
    CHECK(b.derivative_std[30] == Approx(2 * a.derivative_std[30]).epsilon(1e-9));
  }
  SUBCASE("input validation") {
    CHECK_THROWS(fit_smoothing_spline({0, 1, 2}, {0, 1, 2}));
    CHECK_THROWS(fit_smoothing_spline({0, 1, 1, 2}, {0, 1, 2, 3}));
  }
}

TEST_CASE("negative moment ladder on a deterministic drift") {
  // X_s = f s: m^(-1)_{s,t} = f / (1 - e^{-f (t - s)}) and m^(-k) = (m^(-1))^k.
  const double f = 0.8, t = 2.0;
  const PiiCharacteristics pii = PiiCharacteristics::homogeneous(LevyTriplet::brownian(f, 0.0));
  auto exact = [&](double s) { return f / -std::expm1(-f * (t - s)); };
  BaseCurve base;
  for (int i = 0; i < 41; ++i) {
    const double s = 0.2 + 1.2 * i / 40.0;
    base.s.push_back(s);
    base.value.push_back(exact(s));
    base.std_error.push_back(0.0);
  }
  const NegativeLadder ladder = negative_moment_ode(pii, t, 3, base);
  REQUIRE(ladder.depth() == 3);
  CHECK_FALSE(ladder.failure_order);
  for (std::size_t j = 4; j + 4 < base.s.size(); ++j) {
    CHECK(ladder.values[1][j] == Approx(std::pow(exact(base.s[j]), 2)).epsilon(1e-4));
    // Order 3 differentiates a spline-derived curve a second time.
    CHECK(ladder.values[2][j] == Approx(std::pow(exact(base.s[j]), 3)).epsilon(2e-2));
  }
}

TEST_CASE("negative ladder with a noisy base stops at the failing order") {
  const double f = 0.8, t = 2.0;
  const PiiCharacteristics pii = PiiCharacteristics::homogeneous(LevyTriplet::brownian(f, 0.0));
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 1.0);
  BaseCurve base;
  for (int i = 0; i < 30; ++i) {
    const double s = 0.1 + 1.8 * i / 29.0;
    const double v = f / -std::expm1(-f * (t - s));
    base.s.push_back(s);
    base.value.push_back(v * (1 + 0.3 * noise(rng)));
    base.std_error.push_back(0.3 * v);
  }
  const NegativeLadder ladder = negative_moment_ode(pii, t, 6, base);
  CHECK(ladder.failure_order.has_value());
  CHECK(ladder.depth() < 6);
  CHECK_FALSE(ladder.warnings.empty());
}

TEST_CASE("negative ladder preconditions") {
  const PiiCharacteristics pii = PiiCharacteristics::homogeneous(LevyTriplet::brownian(1.0, 0.5));
  BaseCurve base{{0.0, 0.5, 1.0, 1.5}, {1, 1, 1, 1}, {0, 0, 0, 0}};
  CHECK_THROWS_AS(negative_moment_ode(pii, 2.0, 2, base), std::invalid_argument);
  const PiiCharacteristics ts = PiiCharacteristics::homogeneous(LevyTriplet::from_convention(
      0.0, 0.0, JumpMeasure::tempered_stable(1.0, 1.0, 0.5), DriftConvention::FiniteVariation));
  BaseCurve ok{{0.2, 0.5, 1.0, 1.5}, {1, 1, 1, 1}, {0, 0, 0, 0}};
  try {
    negative_moment_ode(ts, 2.0, 3, ok);
    FAIL("expected COND_RT11_VIOLATED");
  } catch (const PreconditionError& e) {
    CHECK(e.code() == "COND_RT11_VIOLATED");
  }
}
