#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "expfunc/moments.hpp"
#include "expfunc/monte_carlo.hpp"
#include "expfunc/shifted_moments.hpp"
#include "expfunc/spec_io.hpp"
#include "expfunc/transforms.hpp"
#include "oracles.hpp"

using namespace expfunc;
using doctest::Approx;

namespace {

PiiCharacteristics levy_pii(LevyModel m) { return PiiCharacteristics::homogeneous(std::move(m)); }

LevyModel poisson(double rate) {
  return LevyTriplet::from_convention(0.0, 0.0, JumpMeasure::point_masses({{1.0, rate}}),
                                      DriftConvention::FiniteVariation);
}

LevyModel gaussian_cp(double rate) {
  return LevyTriplet::from_convention(0.0, 0.0, JumpMeasure::gaussian(rate, 0.0, 1.0), DriftConvention::FiniteVariation);
}

SimulationConfig config(long paths, double t = 1.0) {
  SimulationConfig c;
  c.n_paths = paths;
  c.horizon = t;
  c.time_step = 1e-2;
  return c;
}

void check_within(const McEstimate& e, double expected, double k = 3.0) {
  CAPTURE(e.mean);
  CAPTURE(e.std_error);
  CAPTURE(expected);
  CHECK(std::abs(e.mean - expected) <= k * e.std_error);
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using B = Philox::Block;
  CHECK(Philox::generate(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox::generate(B{~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) == B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox::generate(B{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  Philox a(5, 9), b(5, 9), c(5, 10);
  bool same = true, differ = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a(), y = b(), z = c();
    same &= x == y;
    differ |= x != z;
  }
  CHECK(same);
  CHECK(differ);
  Philox u(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("reproducibility and serial/parallel agreement") {
  for (const auto& file : oracle::corpus()) {
    CAPTURE(file);
    const PiiCharacteristics pii = load_process_spec(file);
    SimulationConfig s = config(500, 0.7);
    s.execution = Execution::Serial;
    SimulationConfig p = s;
    p.execution = Execution::Parallel;
    const auto a = functional_samples(pii, s), b = functional_samples(pii, p), c = functional_samples(pii, p);
    REQUIRE(a.size() == b.size());
    bool identical = true;
    for (std::size_t i = 0; i < a.size(); ++i) identical &= std::memcmp(&a[i], &b[i], sizeof(double)) == 0 &&
                                                            std::memcmp(&b[i], &c[i], sizeof(double)) == 0;
    CHECK(identical);
    const McEstimate e1 = estimate_functional_moment(pii, 0.7, 1.0, s), e2 = estimate_functional_moment(pii, 0.7, 1.0, p);
    CHECK(e1.mean == e2.mean);
    CHECK(e1.std_error == e2.std_error);
    SimulationConfig other = s;
    other.rng_seed += 1;
    CHECK(estimate_functional_moment(pii, 0.7, 1.0, other).mean != e1.mean);
  }
}

TEST_CASE("standard error scales as 1/sqrt(n)") {
  for (const auto& file : oracle::corpus()) {
    CAPTURE(file);
    const PiiCharacteristics pii = load_process_spec(file);
    double ratio_sum = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      SimulationConfig small = config(2000, 0.7), large = config(8000, 0.7);
      small.rng_seed = large.rng_seed = 100 + trial;
      const double se_small = estimate_functional_moment(pii, 0.7, 1.0, small).std_error;
      const double se_large = estimate_functional_moment(pii, 0.7, 1.0, large).std_error;
      ratio_sum += se_small / se_large;
    }
    CHECK(ratio_sum / 3 == Approx(2.0).epsilon(0.2));
  }
}

TEST_CASE("trapezoid rule is second order on a deterministic drift") {
  const PiiCharacteristics drift = levy_pii(LevyTriplet::brownian(1.0, 0.0));
  const double exact = 1 - std::exp(-1.0);
  double err[3];
  for (int i = 0; i < 3; ++i) {
    SimulationConfig c = config(2);
    c.scheme = PathScheme::Grid;
    c.time_step = 0.1 / (1 << i);
    err[i] = std::abs(PathSimulator(drift, c).functional(0) - exact);
  }
  CHECK(err[0] / err[1] >= 3.5);
  CHECK(err[0] / err[1] <= 4.5);
  CHECK(err[1] / err[2] >= 3.5);
  CHECK(err[1] / err[2] <= 4.5);
}

TEST_CASE("mean and variance of X_t match derivatives of the exponent") {
  const std::vector<LevyModel> models{LevyTriplet::brownian(0.6, 0.8), poisson(2.0), gaussian_cp(1.5),
                                      SubordinatedBrownian{1.0, 0.5, 1.0}};
  for (const auto& m : models) {
    const PiiCharacteristics pii = levy_pii(m);
    SimulationConfig c = config(20000);
    c.time_step = 0.05;
    const PathSimulator sim(pii, c);
    double sum = 0.0, sum2 = 0.0;
    std::vector<double> ends;
    for (long i = 0; i < c.n_paths; ++i) ends.push_back(sim.path(i).back());
    for (double x : ends) sum += x;
    const double mean = sum / ends.size();
    for (double x : ends) sum2 += (x - mean) * (x - mean);
    const double var = sum2 / (ends.size() - 1);
    const double h = 1e-4;
    const double d1 = (m.exponent(h).value() - m.exponent(-h).value()) / (2 * h);
    const double d2 = (m.exponent(h).value() - 2 * m.exponent(0).value() + m.exponent(-h).value()) / (h * h);
    CHECK(std::abs(mean - d1) <= 3 * std::sqrt(var / ends.size()));
    // Var of the sample variance ~ (m4 - var^2) / n; 4 sigma^2 sqrt(2/n) is generous for these families.
    CHECK(std::abs(var - (-d2)) <= 3 * var * std::sqrt(2.0 / ends.size()) * 3);
  }
}

TEST_CASE("Monte Carlo mean of I_t against the moment ladder") {
  const std::vector<LevyModel> models{
      LevyTriplet::brownian(1.0, 0.5), poisson(2.0), gaussian_cp(0.5), SubordinatedBrownian{1.0, 0.5, 1.0},
      LevyTriplet::from_convention(0.0, 0.0, JumpMeasure::tempered_stable(1.0, 1.0, 0.5),
                                   DriftConvention::FiniteVariation)};
  for (const auto& m : models) {
    const McEstimate e = estimate_functional_moment(levy_pii(m), 1.0, 1.0, config(20000));
    check_within(e, levy_moment_closed_form(m, 1.0, 1));
    // With Phi(2) < 0 the sample of I_t^2 is too heavy-tailed for 2e4 paths.
    if (!m.exponent(2.0).greater_than(0.0)) continue;
    const McEstimate e2 = estimate_functional_moment(levy_pii(m), 1.0, 2.0, config(20000));
    check_within(e2, levy_moment_divided_difference(m, 1.0, 2), 4.0);
  }
  const PiiCharacteristics p = load_process_spec(oracle::spec_path("ex03b_integrated_levy.json"));
  check_within(estimate_functional_moment(p, 1.0, 1.0, config(20000)), pii_moment_quadrature(p, 1.0, 1).value(1));
}

TEST_CASE("direct and reversed estimators agree") {
  for (const auto& file : oracle::corpus()) {
    CAPTURE(file);
    const PiiCharacteristics pii = load_process_spec(file);
    const McEstimate d = estimate_functional_moment(pii, 1.0, 1.0, config(20000));
    SimulationConfig rc = config(20000);
    rc.rng_seed = 999;
    const McEstimate r = estimate_reversed(pii, 1.0, 1.0, rc);
    CHECK(std::abs(d.mean - r.mean) <= 3 * std::hypot(d.std_error, r.std_error));
  }
}

TEST_CASE("infinite-horizon estimator") {
  SimulationConfig c = config(20000, 20.0);
  const McEstimate e = estimate_infinite(poisson(2.0), 1.0, std::nullopt, c);
  REQUIRE(e.tail_bound);
  const double p1 = poisson(2.0).exponent(1).value();
  CHECK(*e.tail_bound == Approx(std::exp(-p1 * 20.0) / p1));
  CHECK(std::abs(e.mean - infinite_moment(poisson(2.0), 1).value()) <= 3 * e.std_error + *e.tail_bound);
  try {
    estimate_infinite(gaussian_cp(1.0), 1.0, std::nullopt, c);
    FAIL("expected PHI1_NOT_POSITIVE");
  } catch (const PreconditionError& err) {
    CHECK(err.code() == "PHI1_NOT_POSITIVE");
  }
  CHECK_NOTHROW(estimate_infinite(gaussian_cp(1.0), 1.0, std::nullopt, config(10, 1.0), true));
}

TEST_CASE("ratio estimator, CSV dump and configuration checks") {
  const std::vector<double> constant(50, 2.0);
  const RatioEstimate r = estimate_moment_ratio(constant, -3.0, -1.0, config(50));
  CHECK(r.ratio == Approx(0.25));
  CHECK(r.std_error == Approx(0.0));
  std::ostringstream out;
  write_path_csv(out, {0.5, 1.25});
  CHECK(out.str() == "path_id,value\n0,0.5\n1,1.25\n");
  SimulationConfig bad = config(1);
  CHECK_THROWS_AS(bad.validate(), SpecError);
  bad = config(10);
  bad.time_step = 0.0;
  CHECK_THROWS_AS(bad.validate(), SpecError);
}
