#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "expfunc/common.hpp"
#include "expfunc/expression.hpp"
#include "expfunc/quadrature.hpp"

namespace expfunc {

/// Atom of a discrete jump kernel: K(dx) contains rate * delta_location(dx).
struct PointMass {
  double location;
  double rate;
};

/// Compound Poisson kernel rate * N(mean, std^2).
struct GaussianJumps {
  double rate;
  double mean;
  double std;
};

/// Density c e^{-decay x} / x^{1+index} on x > 0.
struct TemperedStable {
  double c;
  double decay;
  double index;
};

/// User-supplied Levy density on [lower, upper] (bounds may be infinite).
/// `integrability_verified` records the caller's assertion that
/// int (x^2 ^ |x|) K(dx) < inf; `envelope`, when present, bounds the density
/// on {|x| > cutoff} and enables rejection sampling.
struct GeneralDensity {
  Expression density;  // variable x
  double lower;
  double upper;
  bool integrability_verified = false;
  std::optional<double> envelope;
};

/// Parametric Levy (jump) kernel.
class JumpMeasure {
 public:
  enum class Kind { None, PointMasses, Density };
  using Repr = std::variant<std::monostate, std::vector<PointMass>, GaussianJumps, TemperedStable, GeneralDensity>;

  JumpMeasure() = default;
  static JumpMeasure none() { return {}; }
  static JumpMeasure point_masses(std::vector<PointMass> atoms);
  static JumpMeasure gaussian(double rate, double mean, double std);
  static JumpMeasure tempered_stable(double c, double decay, double index);
  static JumpMeasure general(GeneralDensity density);

  Kind kind() const;
  const Repr& repr() const { return repr_; }
  bool is_zero() const;

  /// int (e^{-a x} - 1 + a x) K(dx); PlusInfinity when the exponential
  /// moment of order a does not exist.
  Extended compensated_exponent(double alpha) const;

  /// Whether int_{|x|>1} e^{-c x} K(dx) < inf.
  Verdict exponential_tail(double c) const;

  /// int f(x) K(dx) (f should vanish at 0 fast enough).
  double integrate(const ScalarFunction& f) const;

  /// int x K(dx); requires int_{|x|>1} |x| K(dx) < inf.
  double mean_jump() const;

  bool finite_activity() const;
  /// Total mass; only for finite activity.
  double total_rate() const;

  bool has_negative_jumps() const;
  bool has_positive_jumps() const;
  bool bounded_support() const;

  /// Pieces used by compound-Poisson approximation at cutoff eps:
  /// rate and mean of {|x| > eps} and second moment of {|x| <= eps}.
  /// For finite-activity kernels eps is ignored (no cutoff).
  struct Split {
    double rate_above;
    double mean_above;
    double second_moment_below;
  };
  Split split(double eps) const;

  friend bool operator==(const JumpMeasure& a, const JumpMeasure& b);

 private:
  explicit JumpMeasure(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

/// e^{-a x} - 1 + a x evaluated without cancellation for small |a x|.
double compensated_kernel(double alpha, double x);

/// Quadrature route for the tempered-stable compensated integral (series
/// below x = 1e-4, adaptive quadrature above). Independent of the closed
/// form used by JumpMeasure::compensated_exponent.
Extended tempered_stable_compensated_by_quadrature(const TemperedStable& ts, double alpha);

}  // namespace expfunc
