#include "expfunc/finiteness.hpp"

#include <stdexcept>

namespace expfunc {
namespace {

constexpr double kInitialBracket = 64.0;
constexpr double kBracketCap = 64.0 * 1024.0 * 1024.0;
constexpr double kBisectionTolerance = 1e-10;

bool nonpositive(const LevyModel& levy, double a) { return !levy.exponent(a).greater_than(0.0); }

}  // namespace

const OrderVerdict& FinitenessReport::at(int order) const {
  for (const auto& v : verdicts)
    if (v.order == order) return v;
  throw std::out_of_range("finiteness report has no order " + std::to_string(order));
}

FinitenessReport positive_finiteness(const LevyModel& levy, int n_max) {
  if (n_max < 1) throw std::invalid_argument("positive_finiteness: n_max must be >= 1");
  FinitenessReport report;
  double hi = kInitialBracket;
  bool bracketed = nonpositive(levy, hi);
  if (!bracketed && levy.provably_positive()) {
    report.alpha0 = Extended::plus_infinity();
  } else {
    while (!bracketed && hi < kBracketCap) {
      hi *= 2.0;
      bracketed = nonpositive(levy, hi);
    }
    if (!bracketed) {
      report.alpha0 = Extended::plus_infinity();
      report.notes.push_back("ALPHA0_CAP_REACHED");
    } else {
      double lo = 0.0;
      while (hi - lo > kBisectionTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (nonpositive(levy, mid))
          hi = mid;
        else
          lo = mid;
      }
      // No positive value seen: Phi <= 0 on (0, inf) up to the tolerance.
      report.alpha0 = Extended::finite(lo == 0.0 ? 0.0 : 0.5 * (lo + hi));
    }
  }
  for (int n = 1; n <= n_max; ++n) report.verdicts.push_back({n, levy.exponent(n).greater_than(0.0)});
  return report;
}

FinitenessReport negative_finiteness(const LevyModel& levy, int n_max) {
  if (n_max < 1) throw std::invalid_argument("negative_finiteness: n_max must be >= 1");
  FinitenessReport report;
  int beta = 0;
  for (int l = 1; l <= n_max; ++l) {
    const Extended phi = levy.exponent(-static_cast<double>(l));
    if (!phi.is_finite() || !(phi.value() < 0.0)) break;
    beta = l;
  }
  if (beta == 0) {
    beta = 1;
    report.beta_empty_set = true;
    report.notes.push_back("BETA_EMPTY_SET");
  } else if (beta == n_max) {
    report.beta_at_least = true;
  }
  report.beta = beta;
  report.notes.push_back("ASSUME_NEG1_FINITE");
  report.verdicts.push_back({-1, true});
  for (int n = 1; n < n_max; ++n) report.verdicts.push_back({-(n + 1), n <= beta});
  return report;
}

}  // namespace expfunc
