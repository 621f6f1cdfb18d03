#include "expfunc/shifted_moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "expfunc/quadrature.hpp"

namespace expfunc {
namespace {

[[noreturn]] void divergent_order(int k) {
  throw PreconditionError("PHI_DIVERGENT", "Laplace exponent diverges at order " + std::to_string(k));
}

// int_{s_i}^{s_{N-1}} g over a uniform grid. g(j) may be called for j = i - 2
// and i - 1 when only one interval remains (quadratic through three nodes).
template <class G>
double tail_integral(const G& g, int i, int last, double h) {
  const int m = last - i;
  if (m <= 0) return 0.0;
  if (m == 1) {
    if (last >= 2) return h / 12.0 * (-g(last - 2) + 8.0 * g(last - 1) + 5.0 * g(last));
    return 0.5 * h * (g(i) + g(last));
  }
  double sum = 0.0;
  int start = i;
  if (m % 2 == 1) {
    sum += 3.0 * h / 8.0 * (g(i) + 3.0 * g(i + 1) + 3.0 * g(i + 2) + g(i + 3));
    start = i + 3;
  }
  if (start < last) {
    double odd = 0.0, even = 0.0;
    for (int j = start + 1; j < last; j += 2) odd += g(j);
    for (int j = start + 2; j < last; j += 2) even += g(j);
    sum += h / 3.0 * (g(start) + 4.0 * odd + 2.0 * even + g(last));
  }
  return sum;
}

void level(const std::vector<double>& prev, const std::vector<double>& phi, int k, double h, std::vector<double>& out,
           Execution execution) {
  const int size = static_cast<int>(prev.size());
  const int last = size - 1;
  auto column = [&](int i) {
    const double base = phi[i];
    auto g = [&](int j) { return prev[j] * std::exp(base - phi[j]); };
    out[i] = k * tail_integral(g, i, last, h);
  };
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < size; ++i) column(i);
  } else {
    for (int i = 0; i < size; ++i) column(i);
  }
}

}  // namespace

std::vector<std::vector<double>> exponent_grid(const PiiCharacteristics& pii, const std::vector<double>& s, int n) {
  const int size = static_cast<int>(s.size());
  std::vector<std::vector<double>> phi(n + 1, std::vector<double>(size, 0.0));
  const bool exact = std::holds_alternative<PiiCharacteristics::Homogeneous>(pii.variant()) ||
                     std::holds_alternative<PiiCharacteristics::TimeChangedLevy>(pii.variant());
  const double t = s.empty() ? 0.0 : s.back();
  const ItoCharacteristics c = pii.canonical();
  for (int k = 1; k <= n; ++k) {
    if (exact) {
      for (int j = 0; j < size; ++j) {
        const Extended e = phi_between(pii, 0.0, s[j], k);
        if (!e.is_finite()) divergent_order(k);
        phi[k][j] = e.value();
      }
      continue;
    }
    if (check_exp_moment(pii, t, k) == Verdict::Violated) divergent_order(k);
    bool divergent = false;
    auto integrand = [&](double r) {
      const Extended e = h_ito(c, r, k);
      if (!e.is_finite()) {
        divergent = true;
        return 0.0;
      }
      return e.value();
    };
    for (int j = 1; j < size; ++j) phi[k][j] = phi[k][j - 1] + integrate_or_throw(integrand, s[j - 1], s[j]);
    if (divergent) divergent_order(k);
  }
  return phi;
}

std::vector<std::vector<double>> shifted_recursion(const std::vector<std::vector<double>>& phi, double h,
                                                   Execution execution) {
  const int n = static_cast<int>(phi.size()) - 1;
  const std::size_t size = phi.empty() ? 0 : phi[0].size();
  std::vector<std::vector<double>> values(n + 1, std::vector<double>(size, 0.0));
  std::fill(values[0].begin(), values[0].end(), 1.0);
  for (int k = 1; k <= n; ++k) level(values[k - 1], phi[k], k, h, values[k], execution);
  return values;
}

ShiftedMomentGrid shifted_moment_grid(const PiiCharacteristics& pii, double t, int n, int points, Execution execution) {
  if (n < 0) throw std::invalid_argument("shifted_moment_grid: n must be >= 0");
  if (t < 0.0) throw std::invalid_argument("shifted_moment_grid: t must be >= 0");
  if (points < 2) throw std::invalid_argument("shifted_moment_grid: need at least 2 points");
  ShiftedMomentGrid grid;
  grid.horizon = t;
  grid.s.resize(points);
  for (int j = 0; j < points; ++j) grid.s[j] = t * j / (points - 1);
  grid.s.back() = t;
  const double h = t / (points - 1);
  grid.values = shifted_recursion(exponent_grid(pii, grid.s, n), h, execution);
  return grid;
}

MomentLadder pii_moment_quadrature(const PiiCharacteristics& pii, double t, int n,
                                   const QuadratureRecursionOptions& opts) {
  if (n < 1) throw std::invalid_argument("pii_moment_quadrature: n must be >= 1");
  if (t < 0.0) throw std::invalid_argument("pii_moment_quadrature: t must be >= 0");
  MomentLadder ladder{t, {}, {}};
  bool unknown = false;
  for (int k = 1; k <= n; ++k) {
    const Verdict v = check_moment_ladder_condition(pii, t, k);
    if (v == Verdict::Violated)
      throw PreconditionError("COND_RT1_VIOLATED",
                              "negative-jump exponential moment fails at order " + std::to_string(k + 1));
    if (v == Verdict::Unknown) unknown = true;
  }
  if (unknown) ladder.warnings.push_back("COND_RT1_UNKNOWN");
  if (t == 0.0) {
    for (int k = 1; k <= n; ++k) ladder.entries.push_back({k, 0.0, Method::Quadrature, 0.0, true});
    return ladder;
  }

  int points = std::max(3, opts.initial_points);
  ShiftedMomentGrid coarse = shifted_moment_grid(pii, t, n, points, opts.execution);
  std::vector<double> err(n + 1, 0.0);
  bool converged = false;
  while (2 * points - 1 <= opts.max_points) {
    points = 2 * points - 1;
    ShiftedMomentGrid fine = shifted_moment_grid(pii, t, n, points, opts.execution);
    for (int k = 1; k <= n; ++k) err[k] = std::abs(fine.values[k][0] - coarse.values[k][0]);
    coarse = std::move(fine);
    if (err[n] <= opts.relative_tolerance * std::abs(coarse.values[n][0])) {
      converged = true;
      break;
    }
  }
  if (!converged) ladder.warnings.push_back("QUADRATURE_TOLERANCE_NOT_REACHED");
  for (int k = 1; k <= n; ++k) ladder.entries.push_back({k, coarse.values[k][0], Method::Quadrature, err[k], true});
  return ladder;
}

}  // namespace expfunc
