#pragma once

#include <optional>
#include <string>
#include <vector>

#include "expfunc/common.hpp"
#include "expfunc/levy.hpp"

namespace expfunc {

struct OrderVerdict {
  int order;  // positive n for E(I_inf^n), negative -n for E(I_inf^{-n})
  bool finite;
};

struct FinitenessReport {
  /// inf{a > 0 : Phi(a) <= 0}; PlusInfinity when no such a exists.
  std::optional<Extended> alpha0;
  /// sup{k >= 1 : -inf < Phi(-l) < 0 for 1 <= l <= k}, sup of the empty set = 1.
  std::optional<int> beta;
  /// beta reached the scan cap without failure, so it is only a lower bound.
  bool beta_at_least = false;
  /// Phi(-1) is already outside (-inf, 0), so beta = 1 comes from sup(empty).
  bool beta_empty_set = false;
  std::vector<OrderVerdict> verdicts;
  /// Machine-readable codes, e.g. ASSUME_NEG1_FINITE, ALPHA0_CAP_REACHED.
  std::vector<std::string> notes;

  const OrderVerdict& at(int order) const;
};

/// alpha0 by bracketing [0, A] (A doubling from 64) and bisection to 1e-10;
/// verdict for order n is Phi(n) > 0, equivalently n < alpha0 by concavity.
FinitenessReport positive_finiteness(const LevyModel& levy, int n_max);

/// beta by scanning l = 1..n_max. Order -1 is finite by assumption
/// (ASSUME_NEG1_FINITE); order -(n+1) is finite iff n <= beta.
FinitenessReport negative_finiteness(const LevyModel& levy, int n_max);

}  // namespace expfunc
