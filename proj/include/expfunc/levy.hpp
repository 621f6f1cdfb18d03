#pragma once

#include <variant>

#include "expfunc/common.hpp"
#include "expfunc/jump_measure.hpp"

namespace expfunc {

/// How the drift of a triplet was written down.
///
/// Untruncated: Phi(a) = a b - a^2 c / 2 - int (e^{-ax} - 1 + a x) K(dx).
/// Truncated:   compensator uses x 1{|x| <= 1};  b_u = b_t + int_{|x|>1} x K(dx).
/// FiniteVariation: X = b t + sqrt(c) W + sum of jumps; b_u = b + int x K(dx).
enum class DriftConvention { Untruncated, Truncated, FiniteVariation };

/// Generating triplet of a Levy process, always stored untruncated.
struct LevyTriplet {
  double b0 = 0.0;
  double c0 = 0.0;
  JumpMeasure jumps;

  /// Converts (b, c0, K) given in `convention` to the stored form.
  static LevyTriplet from_convention(double b, double c0, JumpMeasure jumps, DriftConvention convention);
  static LevyTriplet brownian(double drift, double variance) { return {drift, variance, JumpMeasure::none()}; }

  /// b0 - int x K(dx): the drift of the finite-variation representation.
  double finite_variation_drift() const { return b0 - jumps.mean_jump(); }

  void validate() const;

  friend bool operator==(const LevyTriplet& a, const LevyTriplet& b) {
    return a.b0 == b.b0 && a.c0 == b.c0 && a.jumps == b.jumps;
  }
};

/// Laplace exponent Phi(a) with E e^{-a X_t} = e^{-t Phi(a)}. Divergent when
/// the exponential moment of order a does not exist.
Extended laplace_exponent(const LevyTriplet& triplet, double alpha);

/// Brownian motion mu s + sigma W_s run on the first-passage clock of an
/// independent Brownian motion with drift b > 0.
struct SubordinatedBrownian {
  double mu = 0.0;
  double sigma = 1.0;
  double b = 1.0;

  void validate() const;
  friend bool operator==(const SubordinatedBrownian&, const SubordinatedBrownian&) = default;
};

/// Phi(a) = sqrt(b^2 + 2 a mu - a^2 sigma^2) - b; divergent once the radicand
/// turns negative.
Extended hitting_time_subordinator_exponent(double mu, double sigma, double b, double alpha);

/// A homogeneous Levy process given either by its triplet or by one of the
/// closed-form exponent families.
class LevyModel {
 public:
  using Repr = std::variant<LevyTriplet, SubordinatedBrownian>;

  LevyModel(LevyTriplet t) : repr_(std::move(t)) { std::get<LevyTriplet>(repr_).validate(); }
  LevyModel(SubordinatedBrownian s) : repr_(s) { s.validate(); }

  const Repr& repr() const { return repr_; }
  const LevyTriplet* triplet() const { return std::get_if<LevyTriplet>(&repr_); }

  Extended exponent(double alpha) const;

  /// Whether E e^{-c L_1} < inf, decided from the jump tails.
  Verdict exponential_moment(double c) const;

  /// Phi(a) > 0 for every a > 0 can be shown from the triplet's structure
  /// (subordinator with nonnegative finite-variation drift, not the zero process).
  bool provably_positive() const;

  friend bool operator==(const LevyModel& a, const LevyModel& b) { return a.repr_ == b.repr_; }

 private:
  Repr repr_;
};

}  // namespace expfunc
