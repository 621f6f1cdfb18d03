#pragma once

#include <optional>
#include <variant>

#include "expfunc/expression.hpp"
#include "expfunc/levy.hpp"

namespace expfunc {

/// Canonical absolutely continuous characteristics
///
///     dX_s = e(s) ds + sqrt(v(s)) dW_s + g(s) dL_{T(s)},   T' = kappa,
///
/// with L a Levy process. Densities of the semimartingale triplet are
/// b_s = e + kappa g b0, c_s = v + kappa g^2 c0 and
/// K_s(A) = kappa(s) K0({x : g(s) x in A}). Every process family reduces to
/// this form, and H^(a)_s = a e - a^2 v / 2 + kappa Phi_L(a g).
struct ItoCharacteristics {
  Expression drift = Expression::constant(0.0);
  Expression variance = Expression::constant(0.0);
  Expression jump_rate = Expression::constant(1.0);
  Expression jump_scale = Expression::constant(1.0);
  LevyModel base = LevyTriplet{};

  double drift_at(double s) const;
  double variance_at(double s) const;
  /// int f(x) K_s(dx). Needs a triplet base.
  double jump_integral_at(double s, const ScalarFunction& f) const;

  friend bool operator==(const ItoCharacteristics&, const ItoCharacteristics&) = default;
};

/// Time-dependent characteristics of a process with independent increments.
class PiiCharacteristics {
 public:
  struct Homogeneous {
    LevyModel levy;
    friend bool operator==(const Homogeneous&, const Homogeneous&) = default;
  };
  /// Counting process with intensity lambda_s (unit jumps).
  struct NonHomPoisson {
    Expression intensity;
    friend bool operator==(const NonHomPoisson&, const NonHomPoisson&) = default;
  };
  /// X_t = L_{tau(t)} for a deterministic C^1 increasing tau, tau(0) = 0.
  struct TimeChangedLevy {
    LevyModel base;
    Expression tau;
    Expression tau_prime;
    friend bool operator==(const TimeChangedLevy&, const TimeChangedLevy&) = default;
  };
  /// X_t = int_0^t g_s dL_s.
  struct IntegratedLevy {
    LevyModel base;
    Expression g;
    friend bool operator==(const IntegratedLevy&, const IntegratedLevy&) = default;
  };
  struct GeneralIto {
    ItoCharacteristics characteristics;
    friend bool operator==(const GeneralIto&, const GeneralIto&) = default;
  };
  using Variant = std::variant<Homogeneous, NonHomPoisson, TimeChangedLevy, IntegratedLevy, GeneralIto>;

  static PiiCharacteristics homogeneous(LevyModel levy);
  static PiiCharacteristics nonhom_poisson(Expression intensity, std::optional<double> horizon_hint = {});
  /// tau' is derived symbolically.
  static PiiCharacteristics time_changed(LevyModel base, Expression tau, std::optional<double> horizon_hint = {});
  static PiiCharacteristics integrated(LevyModel base, Expression g, std::optional<double> horizon_hint = {});
  static PiiCharacteristics general(ItoCharacteristics ch, std::optional<double> horizon_hint = {});

  const Variant& variant() const { return variant_; }
  const std::optional<double>& horizon_hint() const { return horizon_hint_; }
  bool is_homogeneous() const { return std::holds_alternative<Homogeneous>(variant_); }
  /// Levy model of a Homogeneous process; throws otherwise.
  const LevyModel& levy() const;

  ItoCharacteristics canonical() const;

  friend bool operator==(const PiiCharacteristics&, const PiiCharacteristics&) = default;

 private:
  PiiCharacteristics(Variant v, std::optional<double> hint);
  void validate() const;
  Variant variant_;
  std::optional<double> horizon_hint_;
};

/// H^(a)_s of canonical characteristics; divergent when Phi_L(a g(s)) is.
Extended h_ito(const ItoCharacteristics& c, double s, double alpha);

/// H^(a)_s, the time derivative of Phi(s, a).
Extended h_alpha(const PiiCharacteristics& pii, double s, double alpha);

/// Phi(t, a) with E e^{-a X_t} = e^{-Phi(t, a)}.
Extended phi_t(const PiiCharacteristics& pii, double t, double alpha);

/// Phi(u, a) - Phi(s, a), the exponent of the increment X_u - X_s.
Extended phi_between(const PiiCharacteristics& pii, double s, double u, double alpha);

/// int_0^t int_{|x|>1} e^{-a x} K_s(dx) ds < inf.
Verdict check_exp_moment(const PiiCharacteristics& pii, double t, double alpha);

/// Hypotheses of the integer moment recursions: for alpha >= 1 the negative
/// tail condition at alpha + 1 (delta = 1); for alpha < 0 the positive tail
/// condition at |alpha| + 1. Throws std::invalid_argument for 0 <= alpha < 1.
Verdict check_moment_ladder_condition(const PiiCharacteristics& pii, double t, double alpha);

/// Characteristics of Y_s = X_t - X_{(t-s)-} on [0, t].
struct ReversedCharacteristics {
  ItoCharacteristics characteristics;
  double horizon;

  PiiCharacteristics as_pii() const { return PiiCharacteristics::general(characteristics, horizon); }
};

ReversedCharacteristics reverse_characteristics(const PiiCharacteristics& pii, double t);

}  // namespace expfunc
