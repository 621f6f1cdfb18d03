#include <doctest.h>

#include <cmath>

#include "expfunc/pii.hpp"
#include "expfunc/quadrature.hpp"
#include "expfunc/spec_io.hpp"
#include "oracles.hpp"

using namespace expfunc;
using doctest::Approx;

namespace {

LevyModel poisson(double rate, double size = 1.0) {
  return LevyTriplet::from_convention(0.0, 0.0, JumpMeasure::point_masses({{size, rate}}),
                                      DriftConvention::FiniteVariation);
}

LevyModel gaussian_cp(double rate, double mean = 0.0, double std = 1.0) {
  return LevyTriplet::from_convention(0.0, 0.0, JumpMeasure::gaussian(rate, mean, std),
                                      DriftConvention::FiniteVariation);
}

double phi(const LevyModel& m, double a) { return m.exponent(a).value(); }

}  // namespace

TEST_CASE("expression grammar") {
  const Expression e = Expression::parse("2*log(1 + t) + t^2 - exp(-t)/2");
  CHECK(e(0.0) == Approx(-0.5));
  CHECK(e(1.5) == Approx(2 * std::log(2.5) + 2.25 - std::exp(-1.5) / 2));
  const Expression d = e.derivative();
  CHECK(d(1.5) == Approx(2 / 2.5 + 3.0 + std::exp(-1.5) / 2));
  CHECK(Expression::parse(e.to_string()) == e);
  CHECK(e.reflected(2.0)(0.5) == Approx(e(1.5)));
  CHECK(Expression::parse("sqrt(x)", "x")(4.0) == Approx(2.0));
  CHECK(Expression::parse("(1+t)^(-0.5)")(3.0) == Approx(0.5));
  CHECK(Expression::constant(3.0).is_constant());
  CHECK_THROWS(Expression::parse("1 + y"));
  CHECK_THROWS(Expression::parse("sin(t)"));
  CHECK_THROWS(Expression::parse("(1 + t"));
}

TEST_CASE("adaptive quadrature") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0).value == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0).value == Approx(2.0).epsilon(1e-8));
  CHECK(integrate_upper_tail([](double x) { return std::exp(-x); }, 0.0).value == Approx(1.0).epsilon(1e-10));
  CHECK(integrate_upper_tail([](double x) { return 1.0 / (x * x); }, 1.0).value == Approx(1.0).epsilon(1e-9));
  CHECK(integrate_range([](double x) { return std::exp(-x * x); }, -INFINITY, INFINITY).value ==
        Approx(std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("Laplace exponents of the parametric families") {
  SUBCASE("Brownian motion: a mu - a^2 sigma^2 / 2") {
    const LevyModel bm = LevyTriplet::brownian(0.7, 0.4);
    for (double a : {-2.0, 0.5, 3.0}) CHECK(phi(bm, a) == Approx(0.7 * a - 0.2 * a * a));
  }
  SUBCASE("Gaussian jumps: lambda (1 - e^{a^2/2})") {
    const LevyModel g = gaussian_cp(1.3);
    for (double a : {-2.0, 0.5, 3.0}) CHECK(phi(g, a) == Approx(1.3 * (1 - std::exp(a * a / 2))).epsilon(1e-10));
  }
  SUBCASE("Poisson: lambda (1 - e^{-a})") {
    const LevyModel p = poisson(2.0);
    for (double a : {-1.0, 0.5, 3.0}) CHECK(phi(p, a) == Approx(2.0 * (1 - std::exp(-a))).epsilon(1e-12));
  }
  SUBCASE("tempered stable compensated integral against its displayed closed form") {
    const double c = 1.0, M = 1.0, beta = 0.5;
    const JumpMeasure k = JumpMeasure::tempered_stable(c, M, beta);
    for (double a : {0.5, 1.0, 4.0}) {
      const double displayed =
          c * std::tgamma(1 - beta) / (-beta) * (std::pow(M + a, beta) - std::pow(M, beta) - a * std::pow(M, beta - 1) * beta);
      CHECK(k.compensated_exponent(a).value() == Approx(displayed).epsilon(1e-10));
      CHECK(tempered_stable_compensated_by_quadrature({c, M, beta}, a).value() == Approx(displayed).epsilon(1e-8));
    }
    // Exponential moment of order a < -M does not exist.
    CHECK(k.compensated_exponent(-1.5).is_plus_infinity());
    const LevyModel sub =
        LevyTriplet::from_convention(0.0, 0.0, JumpMeasure::tempered_stable(c, M, beta), DriftConvention::FiniteVariation);
    CHECK(sub.exponent(-1.5).is_divergent());
    CHECK(sub.provably_positive());
  }
  SUBCASE("hitting-time subordinator") {
    const double mu = 1.0, sigma = 0.5, b = 1.0;
    const LevyModel m = SubordinatedBrownian{mu, sigma, b};
    for (double a : {0.5, 2.0, 7.0})
      CHECK(phi(m, a) == Approx(std::sqrt(b * b + 2 * a * mu - a * a * sigma * sigma) - b));
    CHECK(m.exponent(9.0).is_divergent());
    // Phi < 0 whenever -b^2 <= 2 a mu - a^2 sigma^2 < 0.
    for (double a = 8.05; a < 8.47; a += 0.05) {
      const double r = 2 * a * mu - a * a * sigma * sigma;
      REQUIRE(r < 0.0);
      if (r >= -b * b) CHECK(phi(m, a) < 0.0);
    }
  }
}

TEST_CASE("drift conventions convert to the untruncated triplet") {
  // Poisson with jumps of size 2: untruncated drift equals the mean 2 lambda.
  const LevyTriplet t =
      LevyTriplet::from_convention(0.0, 0.0, JumpMeasure::point_masses({{2.0, 1.5}}), DriftConvention::Truncated);
  CHECK(t.b0 == Approx(3.0));
  CHECK(laplace_exponent(t, 0.7).value() == Approx(1.5 * (1 - std::exp(-1.4))));
  const LevyTriplet fv =
      LevyTriplet::from_convention(0.0, 0.0, JumpMeasure::point_masses({{2.0, 1.5}}), DriftConvention::FiniteVariation);
  CHECK(fv == t);
  CHECK_THROWS_AS(LevyTriplet::brownian(0.0, -1.0).validate(), SpecError);
  CHECK_THROWS_AS(JumpMeasure::tempered_stable(1.0, 1.0, 1.2), SpecError);
  CHECK_THROWS_AS(JumpMeasure::point_masses({{0.0, 1.0}}), SpecError);
}

TEST_CASE("Phi(0) = 0 and concavity on the corpus") {
  for (const auto& file : oracle::corpus()) {
    CAPTURE(file);
    const PiiCharacteristics pii = load_process_spec(file);
    for (double t : {0.5, 1.0, 2.0}) CHECK(phi_t(pii, t, 0.0).value() == 0.0);
    const double h = 1e-3;
    for (double a = -0.9; a <= 3.0; a += 0.3) {
      const Extended lo = phi_t(pii, 1.0, a - h), mid = phi_t(pii, 1.0, a), hi = phi_t(pii, 1.0, a + h);
      if (!lo.is_finite() || !mid.is_finite() || !hi.is_finite()) continue;
      CHECK(lo.value() - 2 * mid.value() + hi.value() <= 1e-9 * std::max(1.0, std::abs(mid.value())));
    }
  }
}

TEST_CASE("phi_t is the time integral of h_alpha") {
  for (const auto& file : oracle::corpus()) {
    CAPTURE(file);
    const PiiCharacteristics pii = load_process_spec(file);
    for (double a : {0.5, 1.0, 2.0}) {
      const Extended p = phi_t(pii, 1.5, a);
      if (!p.is_finite()) continue;
      const double integral = oracle::simpson([&](double s) { return h_alpha(pii, s, a).value(); }, 0.0, 1.5);
      CHECK(p.value() == Approx(integral).epsilon(1e-8));
    }
  }
}

TEST_CASE("homogeneous and time-changed exponents are exact") {
  const LevyModel bm = LevyTriplet::brownian(1.0, 0.5);
  const PiiCharacteristics h = PiiCharacteristics::homogeneous(bm);
  CHECK(phi_t(h, 2.5, 1.3).value() == 2.5 * bm.exponent(1.3).value());
  const PiiCharacteristics tc = PiiCharacteristics::time_changed(bm, Expression::parse("2*log(1+t)"));
  CHECK(phi_t(tc, 3.0, 2.0).value() == Approx(bm.exponent(2.0).value() * 2 * std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("nonhomogeneous Poisson: h_alpha against finite differences of phi_t") {
  const PiiCharacteristics p = PiiCharacteristics::nonhom_poisson(Expression::parse("1 + t^2"));
  for (double s : {0.3, 1.0, 2.0})
    for (double a : {0.5, 2.0}) {
      const double d = 1e-4;
      const double fd = (phi_t(p, s + d, a).value() - phi_t(p, s - d, a).value()) / (2 * d);
      CHECK(h_alpha(p, s, a).value() == Approx(fd).epsilon(1e-6));
      CHECK(h_alpha(p, s, a).value() == Approx((1 + s * s) * (1 - std::exp(-a))).epsilon(1e-12));
    }
  CHECK(check_exp_moment(p, 3.0, 5.0) == Verdict::Satisfied);
  CHECK_THROWS_AS(PiiCharacteristics::nonhom_poisson(Expression::parse("1 - t")), SpecError);
  CHECK_THROWS_AS(PiiCharacteristics::time_changed(LevyTriplet::brownian(1, 1), Expression::parse("1 + t")), SpecError);
}

TEST_CASE("moment-ladder conditions") {
  const PiiCharacteristics g = PiiCharacteristics::homogeneous(gaussian_cp(1.0));
  CHECK(check_moment_ladder_condition(g, 1.0, 3) == Verdict::Satisfied);
  const PiiCharacteristics s = PiiCharacteristics::homogeneous(SubordinatedBrownian{0.5, 1.0, 2.0});
  CHECK(check_moment_ladder_condition(s, 1.0, 2) == Verdict::Violated);
  CHECK_THROWS_AS(check_moment_ladder_condition(g, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("time reversal of characteristics") {
  SUBCASE("homogeneous is reversal invariant") {
    const PiiCharacteristics h = PiiCharacteristics::homogeneous(LevyTriplet::brownian(1.0, 0.5));
    const auto r = reverse_characteristics(h, 2.0);
    for (double u : {0.1, 1.0, 1.9}) {
      CHECK(r.characteristics.drift_at(u) == h.canonical().drift_at(u));
      CHECK(r.characteristics.variance_at(u) == h.canonical().variance_at(u));
    }
  }
  SUBCASE("nonhomogeneous Poisson intensity s becomes 1 - u") {
    const PiiCharacteristics p = PiiCharacteristics::nonhom_poisson(Expression::parse("t"));
    const auto r = reverse_characteristics(p, 1.0);
    for (double u : {0.0, 0.25, 0.9}) CHECK(r.characteristics.jump_rate(u) == Approx(1.0 - u));
  }
  SUBCASE("time change: reversed rate integrates to tau(t)") {
    const PiiCharacteristics tc =
        PiiCharacteristics::time_changed(LevyTriplet::brownian(1.0, 0.5), Expression::parse("2*log(1+t)"));
    const auto r = reverse_characteristics(tc, 3.0);
    CHECK(oracle::simpson([&](double u) { return r.characteristics.jump_rate(u); }, 0.0, 3.0) ==
          Approx(2 * std::log(4.0)).epsilon(1e-10));
  }
  SUBCASE("mass conservation and double reversal on the corpus") {
    for (const auto& file : oracle::corpus()) {
      CAPTURE(file);
      const PiiCharacteristics pii = load_process_spec(file);
      if (pii.canonical().base.triplet() == nullptr) continue;
      const double t = 1.7;
      const ItoCharacteristics c = pii.canonical();
      const ItoCharacteristics rc = reverse_characteristics(pii, t).characteristics;
      auto total = [&](auto&& f) { return oracle::simpson(f, 0.0, t, 400); };
      CHECK(total([&](double u) { return rc.drift_at(u); }) == Approx(total([&](double u) { return c.drift_at(u); })));
      CHECK(total([&](double u) { return rc.variance_at(u); }) ==
            Approx(total([&](double u) { return c.variance_at(u); })));
      const ScalarFunction tests[] = {
          [](double x) { return x * x; },
          [](double x) { return std::min(x * x, std::abs(x)); },
          [](double x) { return std::expm1(-x) + x; },
      };
      for (const auto& f : tests) {
        if (c.base.exponential_moment(1.0) != Verdict::Satisfied) continue;
        CHECK(total([&](double u) { return rc.jump_integral_at(u, f); }) ==
              Approx(total([&](double u) { return c.jump_integral_at(u, f); })).epsilon(1e-8));
      }
      const ItoCharacteristics twice = reverse_characteristics(PiiCharacteristics::general(rc, t), t).characteristics;
      for (int i = 1; i < 20; ++i) {
        const double u = t * i / 20.0;
        CHECK(twice.drift(u) == Approx(c.drift(u)).epsilon(1e-13));
        CHECK(twice.variance(u) == Approx(c.variance(u)).epsilon(1e-13));
        CHECK(twice.jump_rate(u) == Approx(c.jump_rate(u)).epsilon(1e-13));
        CHECK(twice.jump_scale(u) == Approx(c.jump_scale(u)).epsilon(1e-13));
      }
    }
  }
}
