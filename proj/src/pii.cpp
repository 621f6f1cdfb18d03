#include "expfunc/pii.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "expfunc/quadrature.hpp"

namespace expfunc {
namespace {

constexpr int kConditionSamples = 257;
constexpr double kDefaultValidationHorizon = 10.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const LevyTriplet& require_triplet(const LevyModel& m) {
  const auto* t = m.triplet();
  if (t == nullptr) throw std::invalid_argument("operation needs a Levy triplet base, not a closed-form exponent");
  return *t;
}

void check_samples(const Expression& f, double horizon, const char* what, auto predicate) {
  for (int i = 0; i <= 64; ++i) {
    const double s = horizon * i / 64.0;
    const double v = f(s);
    if (!std::isfinite(v) || !predicate(v))
      throw SpecError(std::string(what) + " fails its domain check at t=" + std::to_string(s) + " (value " +
                      std::to_string(v) + ")");
  }
}

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::Violated || b == Verdict::Violated) return Verdict::Violated;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::Satisfied;
}

}  // namespace

double ItoCharacteristics::drift_at(double s) const {
  const auto& t = require_triplet(base);
  return drift(s) + jump_rate(s) * jump_scale(s) * t.b0;
}

double ItoCharacteristics::variance_at(double s) const {
  const auto& t = require_triplet(base);
  const double g = jump_scale(s);
  return variance(s) + jump_rate(s) * g * g * t.c0;
}

double ItoCharacteristics::jump_integral_at(double s, const ScalarFunction& f) const {
  const auto& t = require_triplet(base);
  const double g = jump_scale(s);
  return jump_rate(s) * t.jumps.integrate([&](double x) { return f(g * x); });
}

PiiCharacteristics::PiiCharacteristics(Variant v, std::optional<double> hint)
    : variant_(std::move(v)), horizon_hint_(hint) {
  validate();
}

PiiCharacteristics PiiCharacteristics::homogeneous(LevyModel levy) {
  return PiiCharacteristics(Homogeneous{std::move(levy)}, std::nullopt);
}

PiiCharacteristics PiiCharacteristics::nonhom_poisson(Expression intensity, std::optional<double> hint) {
  return PiiCharacteristics(NonHomPoisson{std::move(intensity)}, hint);
}

PiiCharacteristics PiiCharacteristics::time_changed(LevyModel base, Expression tau, std::optional<double> hint) {
  Expression prime = tau.derivative();
  return PiiCharacteristics(TimeChangedLevy{std::move(base), std::move(tau), std::move(prime)}, hint);
}

PiiCharacteristics PiiCharacteristics::integrated(LevyModel base, Expression g, std::optional<double> hint) {
  return PiiCharacteristics(IntegratedLevy{std::move(base), std::move(g)}, hint);
}

PiiCharacteristics PiiCharacteristics::general(ItoCharacteristics ch, std::optional<double> hint) {
  return PiiCharacteristics(GeneralIto{std::move(ch)}, hint);
}

void PiiCharacteristics::validate() const {
  if (horizon_hint_ && !(*horizon_hint_ > 0.0)) throw SpecError("horizon_hint must be positive");
  const double h = horizon_hint_.value_or(kDefaultValidationHorizon);
  std::visit(Overloaded{
                 [](const Homogeneous&) {},
                 [&](const NonHomPoisson& p) {
                   check_samples(p.intensity, h, "intensity", [](double v) { return v >= 0.0; });
                 },
                 [&](const TimeChangedLevy& p) {
                   if (std::abs(p.tau(0.0)) > 1e-12) throw SpecError("time change must satisfy tau(0) = 0");
                   check_samples(p.tau_prime, h, "tau'", [](double v) { return v > 0.0; });
                 },
                 [&](const IntegratedLevy& p) {
                   check_samples(p.g, h, "integrand g", [](double v) { return v != 0.0; });
                 },
                 [&](const GeneralIto& p) {
                   const auto& c = p.characteristics;
                   check_samples(c.drift, h, "drift", [](double) { return true; });
                   check_samples(c.variance, h, "variance", [](double v) { return v >= 0.0; });
                   check_samples(c.jump_rate, h, "jump_rate", [](double v) { return v >= 0.0; });
                   check_samples(c.jump_scale, h, "jump_scale", [](double) { return true; });
                 },
             },
             variant_);
}

const LevyModel& PiiCharacteristics::levy() const {
  if (const auto* h = std::get_if<Homogeneous>(&variant_)) return h->levy;
  throw std::invalid_argument("process is not homogeneous");
}

ItoCharacteristics PiiCharacteristics::canonical() const {
  return std::visit(Overloaded{
                        [](const Homogeneous& p) {
                          ItoCharacteristics c;
                          c.base = p.levy;
                          return c;
                        },
                        [](const NonHomPoisson& p) {
                          ItoCharacteristics c;
                          c.jump_rate = p.intensity;
                          // Unit-rate Poisson, untruncated drift = its mean.
                          c.base = LevyTriplet{1.0, 0.0, JumpMeasure::point_masses({{1.0, 1.0}})};
                          return c;
                        },
                        [](const TimeChangedLevy& p) {
                          ItoCharacteristics c;
                          c.jump_rate = p.tau_prime;
                          c.base = p.base;
                          return c;
                        },
                        [](const IntegratedLevy& p) {
                          ItoCharacteristics c;
                          c.jump_scale = p.g;
                          c.base = p.base;
                          return c;
                        },
                        [](const GeneralIto& p) { return p.characteristics; },
                    },
                    variant_);
}

Extended h_ito(const ItoCharacteristics& c, double s, double alpha) {
  if (alpha == 0.0) return Extended::finite(0.0);
  const double kappa = c.jump_rate(s);
  double value = alpha * c.drift(s) - 0.5 * alpha * alpha * c.variance(s);
  if (kappa != 0.0) {
    const Extended base = c.base.exponent(alpha * c.jump_scale(s));
    if (!base.is_finite()) return Extended::divergent();
    value += kappa * base.value();
  }
  return Extended::finite(value);
}

Extended h_alpha(const PiiCharacteristics& pii, double s, double alpha) {
  if (s < 0.0) throw std::invalid_argument("h_alpha: s must be >= 0");
  if (const auto* h = std::get_if<PiiCharacteristics::Homogeneous>(&pii.variant())) return h->levy.exponent(alpha);
  return h_ito(pii.canonical(), s, alpha);
}

Extended phi_between(const PiiCharacteristics& pii, double s, double u, double alpha) {
  if (s < 0.0 || u < s) throw std::invalid_argument("phi_between: need 0 <= s <= u");
  if (u == s || alpha == 0.0) return Extended::finite(0.0);
  if (const auto* h = std::get_if<PiiCharacteristics::Homogeneous>(&pii.variant())) {
    const Extended phi = h->levy.exponent(alpha);
    return phi.is_finite() ? Extended::finite((u - s) * phi.value()) : phi;
  }
  if (const auto* tc = std::get_if<PiiCharacteristics::TimeChangedLevy>(&pii.variant())) {
    const Extended phi = tc->base.exponent(alpha);
    return phi.is_finite() ? Extended::finite(phi.value() * (tc->tau(u) - tc->tau(s))) : phi;
  }
  if (check_exp_moment(pii, u, alpha) == Verdict::Violated) return Extended::divergent();
  const ItoCharacteristics c = pii.canonical();
  bool divergent = false;
  auto integrand = [&](double r) {
    const Extended h = h_ito(c, r, alpha);
    if (!h.is_finite()) {
      divergent = true;
      return 0.0;
    }
    return h.value();
  };
  const double value = integrate_or_throw(integrand, s, u);
  if (divergent) return Extended::divergent();
  return Extended::finite(value);
}

Extended phi_t(const PiiCharacteristics& pii, double t, double alpha) {
  if (t < 0.0) throw std::invalid_argument("phi_t: t must be >= 0");
  return phi_between(pii, 0.0, t, alpha);
}

Verdict check_exp_moment(const PiiCharacteristics& pii, double t, double alpha) {
  if (alpha == 0.0) return Verdict::Satisfied;
  if (const auto* h = std::get_if<PiiCharacteristics::Homogeneous>(&pii.variant()))
    return h->levy.exponential_moment(alpha);
  const ItoCharacteristics c = pii.canonical();
  // The set of c with int_{|x|>1} e^{-cx} K0(dx) < inf is an interval, so the
  // extreme values of a g(s) over the support of kappa decide.
  bool any = false;
  double c_min = 0.0, c_max = 0.0;
  for (int i = 0; i < kConditionSamples; ++i) {
    const double s = t * i / (kConditionSamples - 1);
    if (c.jump_rate(s) <= 0.0) continue;
    const double v = alpha * c.jump_scale(s);
    if (!any) {
      c_min = c_max = v;
      any = true;
    } else {
      c_min = std::min(c_min, v);
      c_max = std::max(c_max, v);
    }
  }
  if (!any) return Verdict::Satisfied;
  Verdict v = worst(c.base.exponential_moment(c_min), c.base.exponential_moment(c_max));
  if (std::holds_alternative<PiiCharacteristics::NonHomPoisson>(pii.variant()) ||
      !c.jump_rate.is_constant()) {
    const QuadratureResult mass = integrate(c.jump_rate, 0.0, t);
    if (!mass.converged || !std::isfinite(mass.value)) v = worst(v, Verdict::Unknown);
  }
  return v;
}

Verdict check_moment_ladder_condition(const PiiCharacteristics& pii, double t, double alpha) {
  if (alpha >= 1.0) return check_exp_moment(pii, t, alpha + 1.0);
  if (alpha < 0.0) return check_exp_moment(pii, t, -(std::abs(alpha) + 1.0));
  throw std::invalid_argument("moment ladder condition is defined for alpha >= 1 or alpha < 0");
}

ReversedCharacteristics reverse_characteristics(const PiiCharacteristics& pii, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("reverse_characteristics: t must be positive");
  ItoCharacteristics c = pii.canonical();
  c.drift = c.drift.reflected(t);
  c.variance = c.variance.reflected(t);
  c.jump_rate = c.jump_rate.reflected(t);
  c.jump_scale = c.jump_scale.reflected(t);
  return {std::move(c), t};
}

}  // namespace expfunc
