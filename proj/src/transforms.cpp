#include "expfunc/transforms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "expfunc/finiteness.hpp"

namespace expfunc {
namespace {

std::vector<double> negative_exponents(const LevyModel& levy, int n) {
  std::vector<double> phi;
  for (int k = 1; k < n; ++k) {
    const Extended e = levy.exponent(-static_cast<double>(k));
    if (!e.is_finite())
      throw PreconditionError("NEG_PHI_DIVERGENT", "Phi(-" + std::to_string(k) + ") diverges");
    if (!(e.value() < 0.0))
      throw PreconditionError("NEG_PHI_NOT_NEGATIVE", "Phi(-" + std::to_string(k) + ") is not negative");
    phi.push_back(e.value());
  }
  return phi;
}

}  // namespace

Extended infinite_moment(const LevyModel& levy, int n) {
  if (n < 1) throw std::invalid_argument("infinite_moment: n must be >= 1");
  double value = 1.0;
  for (int k = 1; k <= n; ++k) {
    const Extended e = levy.exponent(k);
    if (!e.greater_than(0.0)) return Extended::plus_infinity();
    value *= k / e.value();
  }
  return Extended::finite(value);
}

double laplace_carson(const LevyModel& levy, double q, int n) {
  if (!(q > 0.0)) throw std::invalid_argument("laplace_carson: q must be positive");
  if (n < 0) throw std::invalid_argument("laplace_carson: n must be >= 0");
  double value = 1.0;
  for (int k = 1; k <= n; ++k) {
    const Extended e = levy.exponent(k);
    if (!e.is_finite() || !(q + e.value() > 0.0))
      throw PreconditionError("LC_POLE", "q + Phi(" + std::to_string(k) + ") is not positive");
    value *= k / (q + e.value());
  }
  return value;
}

LaplaceSeriesResult laplace_transform_series(const LevyModel& levy, double beta, int max_terms, double tol,
                                             int window) {
  if (!(beta >= 0.0)) throw std::invalid_argument("laplace_transform_series: beta must be >= 0");
  if (max_terms < 1 || window < 1) throw std::invalid_argument("laplace_transform_series: bad limits");
  const FinitenessReport fin = positive_finiteness(levy, 1);
  if (!fin.alpha0->is_plus_infinity())
    throw PreconditionError("ALPHA0_FINITE", "some positive moment of I_inf is infinite (alpha0 = " +
                                                 fin.alpha0->to_string() + ")");
  LaplaceSeriesResult r;
  r.value = 1.0;
  r.terms = 1;
  if (beta == 0.0) {
    r.converged = true;
    return r;
  }
  double term = 1.0;
  double previous = 1.0;
  int decreasing = 0;
  for (int n = 1; n <= max_terms; ++n) {
    term *= -beta / levy.exponent(n).value();
    if (!std::isfinite(term)) break;
    decreasing = std::abs(term) < std::abs(previous) ? decreasing + 1 : 0;
    previous = term;
    if (std::abs(term) < tol && decreasing >= window) {
      r.error_bound = std::abs(term);
      r.converged = true;
      return r;
    }
    r.value += term;
    r.terms = n + 1;
  }
  r.error_bound = std::abs(previous);
  return r;
}

double negative_moment_ratio(const LevyModel& levy, int n) {
  if (n < 2) throw std::invalid_argument("negative_moment_ratio: n must be >= 2");
  double ratio = 1.0;
  int k = 1;
  for (double phi : negative_exponents(levy, n)) ratio *= -phi / k++;
  return ratio;
}

double negative_laplace_carson(const LevyModel& levy, double q, int n, double base_minus_one) {
  if (!(q > 0.0)) throw std::invalid_argument("negative_laplace_carson: q must be positive");
  if (n < 1) throw std::invalid_argument("negative_laplace_carson: n must be >= 1");
  double value = base_minus_one;
  int k = 1;
  for (double phi : negative_exponents(levy, n)) {
    if (!(q + phi < 0.0))
      throw PreconditionError("NEG_LC_SIGN", "q + Phi(-" + std::to_string(k) + ") is not negative");
    value *= -(q + phi) / k++;
  }
  return value;
}

}  // namespace expfunc
