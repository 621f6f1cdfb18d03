#include "expfunc/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expfunc {

const char* to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "ClosedForm";
    case Method::OdeRecursion: return "OdeRecursion";
    case Method::Quadrature: return "Quadrature";
    case Method::McSeeded: return "McSeeded";
  }
  return "?";
}

const MomentLadder::Entry& MomentLadder::at(int order) const {
  for (const auto& e : entries)
    if (e.order == order) return e;
  throw std::out_of_range("ladder has no order " + std::to_string(order));
}

namespace {

std::vector<double> finite_exponents(const LevyModel& levy, int n) {
  std::vector<double> phi(n + 1);
  for (int k = 0; k <= n; ++k) {
    const Extended e = levy.exponent(k);
    if (!e.is_finite())
      throw PreconditionError("PHI_DIVERGENT", "Laplace exponent diverges at order " + std::to_string(k));
    phi[k] = e.value();
  }
  return phi;
}

}  // namespace

double levy_moment_closed_form(const LevyModel& levy, double t, int n) {
  if (n < 1) throw std::invalid_argument("levy_moment_closed_form: n must be >= 1");
  if (t < 0.0) throw std::invalid_argument("levy_moment_closed_form: t must be >= 0");
  const std::vector<double> phi = finite_exponents(levy, n);
  double scale = 0.0;
  for (double p : phi) scale = std::max(scale, std::abs(p));
  for (int i = 0; i <= n; ++i)
    for (int k = i + 1; k <= n; ++k)
      if (std::abs(phi[i] - phi[k]) < 1e-9 * scale || scale == 0.0)
        throw NearConfluentError("Phi(" + std::to_string(i) + ") and Phi(" + std::to_string(k) +
                                 ") are confluent; use the ODE recursion");
  double sum = 0.0;
  const double tail = std::exp(-phi[n] * t);
  for (int k = 0; k < n; ++k) {
    double denom = 1.0;
    for (int i = 0; i <= n; ++i)
      if (i != k) denom *= phi[i] - phi[k];
    sum += (std::exp(-phi[k] * t) - tail) / denom;
  }
  return std::tgamma(n + 1.0) * sum;
}

double levy_moment_divided_difference(const LevyModel& levy, double t, int n) {
  if (n < 1) throw std::invalid_argument("levy_moment_divided_difference: n must be >= 1");
  if (t < 0.0) throw std::invalid_argument("levy_moment_divided_difference: t must be >= 0");
  std::vector<double> x = finite_exponents(levy, n);
  std::sort(x.begin(), x.end());
  double scale = 0.0;
  for (double p : x) scale = std::max(scale, std::abs(p));
  // Snap near-coincident nodes onto their group's first member.
  for (int i = 1; i <= n; ++i)
    if (x[i] - x[i - 1] < 1e-9 * scale || scale == 0.0) x[i] = x[i - 1];
  // table[i] holds f[x_i, ..., x_{i+j}] after column j.
  std::vector<double> table(n + 1);
  for (int i = 0; i <= n; ++i) table[i] = std::exp(-x[i] * t);
  for (int j = 1; j <= n; ++j) {
    for (int i = 0; i + j <= n; ++i) {
      if (x[i + j] == x[i]) {
        // f^(j)(x_i) / j! for a block of j + 1 equal nodes.
        double v = std::exp(-x[i] * t);
        for (int m = 1; m <= j; ++m) v *= -t / m;
        table[i] = v;
      } else {
        table[i] = (table[i + 1] - table[i]) / (x[i + j] - x[i]);
      }
    }
  }
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  return std::tgamma(n + 1.0) * sign * table[0];
}

namespace {

// One RK4 sweep of the ladder system with `steps` equal steps.
std::vector<double> rk4_ladder(const std::vector<double>& phi, double t, long steps) {
  const int n = static_cast<int>(phi.size()) - 1;
  const double h = t / static_cast<double>(steps);
  std::vector<double> m(n + 1, 0.0), k1(n + 1), k2(n + 1), k3(n + 1), k4(n + 1), tmp(n + 1);
  m[0] = 1.0;
  auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = 0.0;
    for (int k = 1; k <= n; ++k) dy[k] = -phi[k] * y[k] + k * y[k - 1];
  };
  for (long s = 0; s < steps; ++s) {
    rhs(m, k1);
    for (int k = 0; k <= n; ++k) tmp[k] = m[k] + 0.5 * h * k1[k];
    rhs(tmp, k2);
    for (int k = 0; k <= n; ++k) tmp[k] = m[k] + 0.5 * h * k2[k];
    rhs(tmp, k3);
    for (int k = 0; k <= n; ++k) tmp[k] = m[k] + h * k3[k];
    rhs(tmp, k4);
    for (int k = 0; k <= n; ++k) m[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  }
  return m;
}

}  // namespace

LadderSolution exponent_ladder_ode(const std::vector<double>& phi, double t, const OdeOptions& opts) {
  if (phi.empty()) throw std::invalid_argument("exponent_ladder_ode: empty exponent list");
  const int n = static_cast<int>(phi.size()) - 1;
  LadderSolution sol;
  sol.errors.assign(n + 1, 0.0);
  if (t == 0.0) {
    sol.values.assign(n + 1, 0.0);
    sol.values[0] = 1.0;
    return sol;
  }
  double max_phi = 0.0;
  for (double p : phi) max_phi = std::max(max_phi, std::abs(p));
  long steps = std::max<long>(1, static_cast<long>(std::ceil(t / opts.base_step)));
  if (max_phi * t > 0.0) steps = std::max(steps, static_cast<long>(std::ceil(max_phi * t / opts.stiffness_limit)));
  std::vector<double> coarse = rk4_ladder(phi, t, steps);
  sol.values = coarse;
  sol.converged = false;
  while (!sol.converged && 2 * steps <= opts.max_steps) {
    steps *= 2;
    std::vector<double> fine = rk4_ladder(phi, t, steps);
    sol.converged = true;
    for (int k = 1; k <= n; ++k) {
      const double diff = fine[k] - coarse[k];
      sol.values[k] = fine[k] + diff / 15.0;
      sol.errors[k] = std::abs(diff) / 15.0;
      if (std::abs(diff) > opts.relative_tolerance * std::abs(fine[k])) sol.converged = false;
    }
    coarse = std::move(fine);
  }
  return sol;
}

MomentLadder levy_moment_ode(const LevyModel& levy, double t, int n, const OdeOptions& opts) {
  if (n < 1) throw std::invalid_argument("levy_moment_ode: n must be >= 1");
  if (t < 0.0) throw std::invalid_argument("levy_moment_ode: t must be >= 0");
  MomentLadder ladder{t, {}, {}};

  // Orders whose exponent diverges (and everything above) are unavailable.
  int usable = 0;
  std::vector<double> phi{0.0};
  for (int k = 1; k <= n; ++k) {
    const Extended e = levy.exponent(k);
    if (!e.is_finite()) break;
    if (levy.exponential_moment(k + 1.0) == Verdict::Violated) break;
    phi.push_back(e.value());
    usable = k;
  }
  if (usable < n) ladder.warnings.push_back("PHI_DIVERGENT_ORDER_" + std::to_string(usable + 1));

  if (usable > 0) {
    const LadderSolution sol = exponent_ladder_ode(phi, t, opts);
    if (!sol.converged) ladder.warnings.push_back("ODE_TOLERANCE_NOT_REACHED");
    bool overflow = false;
    for (int k = 1; k <= usable; ++k) {
      // Orders beyond double range (e.g. e^{-Phi(k) t} with Phi(k) << 0).
      if (!overflow && !std::isfinite(sol.values[k])) {
        overflow = true;
        ladder.warnings.push_back("MOMENT_OVERFLOW_ORDER_" + std::to_string(k));
      }
      ladder.entries.push_back({k, overflow ? 0.0 : sol.values[k], Method::OdeRecursion,
                                overflow ? 0.0 : sol.errors[k], !overflow});
    }
  }
  for (int k = usable + 1; k <= n; ++k) ladder.entries.push_back({k, 0.0, Method::OdeRecursion, 0.0, false});
  return ladder;
}

}  // namespace expfunc
