#include "expfunc/jump_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace expfunc {
namespace {

constexpr double kSeriesCut = 1e-4;
constexpr double kMaxExponent = 709.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Saturating exponential: values beyond double range clamp to DBL_MAX so
// sign information survives.
double saturating_expm1(double z) {
  if (z > kMaxExponent) return std::numeric_limits<double>::max();
  return std::expm1(z);
}

double ts_density(const TemperedStable& ts, double x) {
  if (x <= 0.0) return 0.0;
  return ts.c * std::exp(-ts.decay * x) * std::pow(x, -1.0 - ts.index);
}

double integrate_ts(const TemperedStable& ts, const ScalarFunction& f, double from = 0.0) {
  auto integrand = [&](double x) {
    const double d = ts_density(ts, x);
    return d == 0.0 ? 0.0 : f(x) * d;
  };
  double total = 0.0;
  if (from < 1.0) total += integrate_or_throw(integrand, from, 1.0);
  total += integrate_or_throw(integrand, std::max(1.0, from), std::numeric_limits<double>::infinity());
  return total;
}

double integrate_general(const GeneralDensity& g, const ScalarFunction& f) {
  auto integrand = [&](double x) {
    const double d = g.density(x);
    return d == 0.0 ? 0.0 : f(x) * d;
  };
  double total = 0.0;
  // Pieces split at -1, 0, 1 so singular behaviour sits at endpoints.
  const double cuts[] = {g.lower, -1.0, 0.0, 1.0, g.upper};
  for (int i = 0; i + 1 < 5; ++i) {
    const double a = std::max(cuts[i], g.lower);
    const double b = std::min(cuts[i + 1], g.upper);
    if (b > a) total += integrate_or_throw(integrand, a, b);
  }
  return total;
}

// Scans int_1^L e^{-c s x} f(s x) dx for growing L, s = +1 (right tail) or
// s = -1 (left tail).
Verdict tail_scan(const GeneralDensity& g, double c, double side) {
  auto integrand = [&](double x) {
    const double y = side * x;
    const double d = g.density(y);
    if (d == 0.0) return 0.0;
    const double z = -c * y;
    if (z > kMaxExponent) return std::numeric_limits<double>::infinity();
    return std::exp(z) * d;
  };
  const double bound = side > 0 ? g.upper : -g.lower;
  if (bound <= 1.0) return Verdict::Satisfied;
  if (std::isfinite(bound)) return Verdict::Satisfied;
  std::vector<double> increments;
  double total = 0.0;
  double lo = 1.0;
  for (int k = 0; k < 9; ++k) {
    const double hi = 1.0 + 4.0 * std::pow(2.0, k);
    QuadratureResult r = integrate(integrand, lo, hi);
    if (!std::isfinite(r.value)) return Verdict::Violated;
    increments.push_back(r.value);
    total += r.value;
    lo = hi;
  }
  const std::size_t n = increments.size();
  const double last = increments[n - 1];
  if (last <= 1e-12 * (1.0 + std::abs(total)) && increments[n - 2] >= last) return Verdict::Satisfied;
  if (last > 0 && increments[n - 1] >= increments[n - 2] && increments[n - 2] >= increments[n - 3])
    return Verdict::Violated;
  return Verdict::Unknown;
}

}  // namespace

double compensated_kernel(double alpha, double x) {
  const double z = alpha * x;
  if (std::abs(z) < 1e-4) {
    // z^2/2 - z^3/6 + z^4/24
    return z * z * (0.5 - z / 6.0 + z * z / 24.0);
  }
  if (-z > kMaxExponent) return std::numeric_limits<double>::max();
  return std::expm1(-z) + z;
}

JumpMeasure JumpMeasure::point_masses(std::vector<PointMass> atoms) {
  for (const auto& a : atoms) {
    if (!(a.rate > 0.0) || !std::isfinite(a.rate)) throw SpecError("point mass rate must be positive");
    if (a.location == 0.0 || !std::isfinite(a.location)) throw SpecError("point mass location must be nonzero");
  }
  if (atoms.empty()) return none();
  return JumpMeasure(Repr(std::move(atoms)));
}

JumpMeasure JumpMeasure::gaussian(double rate, double mean, double std) {
  if (!(rate > 0.0)) throw SpecError("gaussian_jumps: lambda must be positive");
  if (!(std > 0.0)) throw SpecError("gaussian_jumps: std must be positive");
  if (!std::isfinite(mean)) throw SpecError("gaussian_jumps: mean must be finite");
  return JumpMeasure(Repr(GaussianJumps{rate, mean, std}));
}

JumpMeasure JumpMeasure::tempered_stable(double c, double decay, double index) {
  if (!(c > 0.0)) throw SpecError("tempered_stable: c must be positive");
  if (!(decay > 0.0)) throw SpecError("tempered_stable: M must be positive");
  if (!(index > 0.0 && index < 1.0)) throw SpecError("tempered_stable: beta must lie in (0, 1)");
  return JumpMeasure(Repr(TemperedStable{c, decay, index}));
}

JumpMeasure JumpMeasure::general(GeneralDensity density) {
  if (!(density.lower < density.upper)) throw SpecError("general_density: lower must be below upper");
  if (!(density.lower <= 0.0 || density.upper >= 0.0)) throw SpecError("general_density: empty support");
  if (density.envelope && !(*density.envelope > 0.0)) throw SpecError("general_density: envelope must be positive");
  if (!density.integrability_verified)
    throw SpecError("general_density: integrability of (x^2 ^ |x|) must be asserted by the caller");
  return JumpMeasure(Repr(std::move(density)));
}

JumpMeasure::Kind JumpMeasure::kind() const {
  switch (repr_.index()) {
    case 0: return Kind::None;
    case 1: return Kind::PointMasses;
    default: return Kind::Density;
  }
}

bool JumpMeasure::is_zero() const { return repr_.index() == 0; }

Extended JumpMeasure::compensated_exponent(double alpha) const {
  if (alpha == 0.0) return Extended::finite(0.0);
  return std::visit(
      Overloaded{
          [](const std::monostate&) { return Extended::finite(0.0); },
          [&](const std::vector<PointMass>& atoms) {
            double s = 0.0;
            for (const auto& a : atoms) s += a.rate * compensated_kernel(alpha, a.location);
            return Extended::finite(s);
          },
          [&](const GaussianJumps& g) {
            const double z = -alpha * g.mean + 0.5 * alpha * alpha * g.std * g.std;
            const double e = saturating_expm1(z);
            if (e == std::numeric_limits<double>::max()) return Extended::finite(e);
            return Extended::finite(g.rate * (e + alpha * g.mean));
          },
          [&](const TemperedStable& ts) {
            const double shifted = ts.decay + alpha;
            if (shifted < 0.0) return Extended::plus_infinity();
            const double beta = ts.index;
            const double lead = ts.c * std::tgamma(1.0 - beta) / (-beta);
            const double bracket = std::pow(shifted, beta) - std::pow(ts.decay, beta) -
                                   alpha * beta * std::pow(ts.decay, beta - 1.0);
            return Extended::finite(lead * bracket);
          },
          [&](const GeneralDensity& g) {
            if (exponential_tail(alpha) == Verdict::Violated) return Extended::plus_infinity();
            return Extended::finite(integrate_general(g, [&](double x) { return compensated_kernel(alpha, x); }));
          },
      },
      repr_);
}

Verdict JumpMeasure::exponential_tail(double c) const {
  return std::visit(Overloaded{
                        [](const std::monostate&) { return Verdict::Satisfied; },
                        [](const std::vector<PointMass>&) { return Verdict::Satisfied; },
                        [](const GaussianJumps&) { return Verdict::Satisfied; },
                        [&](const TemperedStable& ts) {
                          return c >= -ts.decay ? Verdict::Satisfied : Verdict::Violated;
                        },
                        [&](const GeneralDensity& g) {
                          const Verdict right = tail_scan(g, c, 1.0);
                          const Verdict left = tail_scan(g, c, -1.0);
                          if (right == Verdict::Violated || left == Verdict::Violated) return Verdict::Violated;
                          if (right == Verdict::Unknown || left == Verdict::Unknown) return Verdict::Unknown;
                          return Verdict::Satisfied;
                        },
                    },
                    repr_);
}

double JumpMeasure::integrate(const ScalarFunction& f) const {
  return std::visit(
      Overloaded{
          [](const std::monostate&) { return 0.0; },
          [&](const std::vector<PointMass>& atoms) {
            double s = 0.0;
            for (const auto& a : atoms) s += a.rate * f(a.location);
            return s;
          },
          [&](const GaussianJumps& g) {
            const double norm = 1.0 / (g.std * std::sqrt(2.0 * std::numbers::pi));
            auto integrand = [&](double x) {
              const double z = (x - g.mean) / g.std;
              const double w = norm * std::exp(-0.5 * z * z);
              return w == 0.0 ? 0.0 : f(x) * w;
            };
            const double inf = std::numeric_limits<double>::infinity();
            return g.rate * (integrate_or_throw(integrand, -inf, g.mean) + integrate_or_throw(integrand, g.mean, inf));
          },
          [&](const TemperedStable& ts) { return integrate_ts(ts, f); },
          [&](const GeneralDensity& g) { return integrate_general(g, f); },
      },
      repr_);
}

double JumpMeasure::mean_jump() const {
  return std::visit(Overloaded{
                        [](const std::monostate&) { return 0.0; },
                        [](const std::vector<PointMass>& atoms) {
                          double s = 0.0;
                          for (const auto& a : atoms) s += a.rate * a.location;
                          return s;
                        },
                        [](const GaussianJumps& g) { return g.rate * g.mean; },
                        [](const TemperedStable& ts) {
                          return ts.c * std::tgamma(1.0 - ts.index) * std::pow(ts.decay, ts.index - 1.0);
                        },
                        [](const GeneralDensity& g) {
                          JumpMeasure m = JumpMeasure::general(g);
                          return m.integrate([](double x) { return x; });
                        },
                    },
                    repr_);
}

bool JumpMeasure::finite_activity() const {
  return repr_.index() <= 2;
}

double JumpMeasure::total_rate() const {
  if (!finite_activity()) throw std::logic_error("total_rate() on an infinite-activity kernel");
  return std::visit(Overloaded{
                        [](const std::vector<PointMass>& atoms) {
                          double s = 0.0;
                          for (const auto& a : atoms) s += a.rate;
                          return s;
                        },
                        [](const GaussianJumps& g) { return g.rate; },
                        [](const auto&) { return 0.0; },
                    },
                    repr_);
}

bool JumpMeasure::has_negative_jumps() const {
  return std::visit(Overloaded{
                        [](const std::monostate&) { return false; },
                        [](const std::vector<PointMass>& atoms) {
                          return std::any_of(atoms.begin(), atoms.end(), [](auto& a) { return a.location < 0; });
                        },
                        [](const GaussianJumps&) { return true; },
                        [](const TemperedStable&) { return false; },
                        [](const GeneralDensity& g) { return g.lower < 0.0; },
                    },
                    repr_);
}

bool JumpMeasure::has_positive_jumps() const {
  return std::visit(Overloaded{
                        [](const std::monostate&) { return false; },
                        [](const std::vector<PointMass>& atoms) {
                          return std::any_of(atoms.begin(), atoms.end(), [](auto& a) { return a.location > 0; });
                        },
                        [](const GaussianJumps&) { return true; },
                        [](const TemperedStable&) { return true; },
                        [](const GeneralDensity& g) { return g.upper > 0.0; },
                    },
                    repr_);
}

bool JumpMeasure::bounded_support() const {
  return std::visit(Overloaded{
                        [](const std::monostate&) { return true; },
                        [](const std::vector<PointMass>&) { return true; },
                        [](const GaussianJumps&) { return false; },
                        [](const TemperedStable&) { return false; },
                        [](const GeneralDensity& g) { return std::isfinite(g.lower) && std::isfinite(g.upper); },
                    },
                    repr_);
}

JumpMeasure::Split JumpMeasure::split(double eps) const {
  if (finite_activity()) return {is_zero() ? 0.0 : total_rate(), mean_jump(), 0.0};
  return std::visit(
      Overloaded{
          [&](const TemperedStable& ts) {
            const double rate = integrate_ts(ts, [](double) { return 1.0; }, eps);
            const double mean = integrate_ts(ts, [](double x) { return x; }, eps);
            // c int_0^eps x^{1-b} e^{-Mx} dx by its power series.
            double below = 0.0;
            double term = 1.0;  // (-M)^j / j!
            for (int j = 0; j < 30; ++j) {
              const double p = 2.0 - ts.index + j;
              below += term * std::pow(eps, p) / p;
              term *= -ts.decay / (j + 1);
            }
            return Split{rate, mean, ts.c * below};
          },
          [&](const GeneralDensity& g) {
            JumpMeasure above = JumpMeasure::general(g);
            const double rate = above.integrate([&](double x) { return std::abs(x) > eps ? 1.0 : 0.0; });
            const double mean = above.integrate([&](double x) { return std::abs(x) > eps ? x : 0.0; });
            const double below = above.integrate([&](double x) { return std::abs(x) <= eps ? x * x : 0.0; });
            return Split{rate, mean, below};
          },
          [](const auto&) { return Split{0.0, 0.0, 0.0}; },
      },
      repr_);
}

bool operator==(const JumpMeasure& a, const JumpMeasure& b) {
  if (a.repr_.index() != b.repr_.index()) return false;
  return std::visit(
      Overloaded{
          [](const std::monostate&, const std::monostate&) { return true; },
          [](const std::vector<PointMass>& x, const std::vector<PointMass>& y) {
            if (x.size() != y.size()) return false;
            for (std::size_t i = 0; i < x.size(); ++i)
              if (x[i].location != y[i].location || x[i].rate != y[i].rate) return false;
            return true;
          },
          [](const GaussianJumps& x, const GaussianJumps& y) {
            return x.rate == y.rate && x.mean == y.mean && x.std == y.std;
          },
          [](const TemperedStable& x, const TemperedStable& y) {
            return x.c == y.c && x.decay == y.decay && x.index == y.index;
          },
          [](const GeneralDensity& x, const GeneralDensity& y) {
            return x.density == y.density && x.lower == y.lower && x.upper == y.upper &&
                   x.integrability_verified == y.integrability_verified && x.envelope == y.envelope;
          },
          [](const auto&, const auto&) { return false; },
      },
      a.repr_, b.repr_);
}

Extended tempered_stable_compensated_by_quadrature(const TemperedStable& ts, double alpha) {
  if (ts.decay + alpha < 0.0) return Extended::plus_infinity();
  const double beta = ts.index;
  // Taylor coefficients of (e^{-ax} - 1 + a x) e^{-Mx}; j = 0, 1 vanish.
  double series = 0.0;
  double fact = 1.0;
  for (int j = 2; j < 16; ++j) {
    fact *= j;
    const double coeff = (std::pow(-(alpha + ts.decay), j) - std::pow(-ts.decay, j)) / fact +
                         alpha * std::pow(-ts.decay, j - 1) * j / fact;
    series += coeff * std::pow(kSeriesCut, j - beta) / (j - beta);
  }
  series *= ts.c;
  auto integrand = [&](double x) { return compensated_kernel(alpha, x) * ts_density(ts, x); };
  const double mid = integrate_or_throw(integrand, kSeriesCut, 1.0);
  const double tail = integrate_or_throw(integrand, 1.0, std::numeric_limits<double>::infinity());
  return Extended::finite(series + mid + tail);
}

}  // namespace expfunc
