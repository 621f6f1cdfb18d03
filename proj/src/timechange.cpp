#include "expfunc/timechange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace expfunc {
namespace {

constexpr double kConfluence = 1e-9;

}  // namespace

TimechangeMoment timechange_log_moments(const LevyModel& base, double r, double t, int order) {
  if (!(r > 0.0)) throw std::invalid_argument("timechange_log_moments: r must be positive");
  if (t < 0.0) throw std::invalid_argument("timechange_log_moments: t must be >= 0");
  if (order < 1) throw std::invalid_argument("timechange_log_moments: order must be >= 1");
  const int n = order - 1;
  std::vector<double> phi(order + 1, 0.0);
  for (int k = 1; k <= order; ++k) {
    const Extended e = base.exponent(k);
    if (!e.is_finite())
      throw PreconditionError("PHI_DIVERGENT", "Laplace exponent diverges at order " + std::to_string(k));
    phi[k] = e.value();
  }
  if (t == 0.0) return {0.0, Method::ClosedForm};
  const double log1t = std::log1p(t);

  if (n == 0) {
    const double a = r * phi[1] - 1.0;
    if (std::abs(a) < kConfluence) return {log1t, Method::ClosedForm};
    return {-std::expm1(-a * log1t) / a, Method::ClosedForm};
  }

  std::vector<double> rho(n + 1);
  double scale = 1.0;
  for (int k = 0; k <= n; ++k) {
    rho[k] = r * phi[k] - k;
    scale = std::max(scale, std::abs(rho[k]));
  }
  bool confluent = false;
  for (int i = 0; i <= n; ++i)
    for (int k = i + 1; k <= n; ++k)
      if (std::abs(rho[i] - rho[k]) < kConfluence * scale) confluent = true;
  if (confluent) {
    std::vector<double> exponents(order + 1);
    for (int k = 0; k <= order; ++k) exponents[k] = r * phi[k] - k;
    const LadderSolution sol = exponent_ladder_ode(exponents, log1t);
    return {sol.values[order], Method::OdeRecursion};
  }
  // ((1+t)^{g+1} - 1) / ((g+1)(1+t)^{rho(k)})
  auto q = [&](int k) {
    const double g1 = n - k - r * (phi[n + 1] - phi[k]) + 1.0;
    const double x = g1 * log1t;
    const double growth = std::abs(x) < 1e-8 ? log1t * (1.0 + 0.5 * x) : std::expm1(x) / g1;
    return growth * std::exp(-rho[k] * log1t);
  };
  const double qnn = q(n);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    double denom = 1.0;
    for (int i = 0; i <= n; ++i)
      if (i != k) denom *= rho[i] - rho[k];
    sum += (q(k) - qnn) / denom;
  }
  return {std::tgamma(order + 1.0) * sum, Method::ClosedForm};
}

}  // namespace expfunc
