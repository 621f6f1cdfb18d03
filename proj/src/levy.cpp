#include "expfunc/levy.hpp"

#include <cmath>

namespace expfunc {

LevyTriplet LevyTriplet::from_convention(double b, double c0, JumpMeasure jumps, DriftConvention convention) {
  double b0 = b;
  switch (convention) {
    case DriftConvention::Untruncated:
      break;
    case DriftConvention::Truncated:
      b0 = b + jumps.integrate([](double x) { return std::abs(x) > 1.0 ? x : 0.0; });
      break;
    case DriftConvention::FiniteVariation:
      b0 = b + jumps.mean_jump();
      break;
  }
  LevyTriplet t{b0, c0, std::move(jumps)};
  t.validate();
  return t;
}

void LevyTriplet::validate() const {
  if (!std::isfinite(b0)) throw SpecError("triplet drift b0 must be finite");
  if (!(c0 >= 0.0) || !std::isfinite(c0)) throw SpecError("triplet variance c0 must be finite and >= 0");
}

Extended laplace_exponent(const LevyTriplet& triplet, double alpha) {
  if (alpha == 0.0) return Extended::finite(0.0);
  const Extended jump = triplet.jumps.compensated_exponent(alpha);
  if (!jump.is_finite()) return Extended::divergent();
  return Extended::finite(alpha * triplet.b0 - 0.5 * alpha * alpha * triplet.c0 - jump.value());
}

void SubordinatedBrownian::validate() const {
  if (!(b > 0.0)) throw SpecError("subordinated_brownian: b must be positive");
  if (!(sigma > 0.0)) throw SpecError("subordinated_brownian: sigma must be positive");
  if (!std::isfinite(mu)) throw SpecError("subordinated_brownian: mu must be finite");
}

Extended hitting_time_subordinator_exponent(double mu, double sigma, double b, double alpha) {
  if (alpha == 0.0) return Extended::finite(0.0);
  const double radicand = b * b + 2.0 * alpha * mu - alpha * alpha * sigma * sigma;
  if (radicand < 0.0) return Extended::divergent();
  return Extended::finite(std::sqrt(radicand) - b);
}

Extended LevyModel::exponent(double alpha) const {
  if (const auto* t = triplet()) return laplace_exponent(*t, alpha);
  const auto& s = std::get<SubordinatedBrownian>(repr_);
  return hitting_time_subordinator_exponent(s.mu, s.sigma, s.b, alpha);
}

Verdict LevyModel::exponential_moment(double c) const {
  if (const auto* t = triplet()) return t->jumps.exponential_tail(c);
  return exponent(c).is_finite() ? Verdict::Satisfied : Verdict::Violated;
}

bool LevyModel::provably_positive() const {
  const auto* t = triplet();
  if (t == nullptr) return false;
  if (t->c0 != 0.0 || t->jumps.has_negative_jumps()) return false;
  const double drift = t->finite_variation_drift();
  if (drift < 0.0) return false;
  return !t->jumps.is_zero() || drift > 0.0;
}

}  // namespace expfunc
