#pragma once

#include "expfunc/common.hpp"
#include "expfunc/levy.hpp"

namespace expfunc {

/// E(I_inf^n) = n! / prod_{k=1}^n Phi(k), or PlusInfinity when Phi(n) <= 0
/// (n >= alpha0) or some Phi(k) diverges.
Extended infinite_moment(const LevyModel& levy, int n);

/// n! / prod_{k=1}^n (q + Phi(k)). Throws PreconditionError("LC_POLE") when
/// q + Phi(k) <= 0 or Phi(k) diverges for some k <= n.
double laplace_carson(const LevyModel& levy, double q, int n);

struct LaplaceSeriesResult {
  double value = 0.0;
  double error_bound = 0.0;
  int terms = 0;
  bool converged = false;
};

/// sum_n (-beta)^n / prod_{k<=n} Phi(k). Stops once the next term is below
/// `tol` and the last `window` terms were strictly decreasing in magnitude,
/// reporting that term as the alternating-series error bound. Throws
/// PreconditionError("ALPHA0_FINITE") unless every positive moment is finite.
LaplaceSeriesResult laplace_transform_series(const LevyModel& levy, double beta, int max_terms = 100000,
                                             double tol = 1e-12, int window = 5);

/// E(I_inf^{-n}) / E(I_inf^{-1}) = ((-1)^{n-1}/(n-1)!) prod_{k=1}^{n-1} Phi(-k).
/// Throws PreconditionError("NEG_PHI_DIVERGENT") or ("NEG_PHI_NOT_NEGATIVE").
double negative_moment_ratio(const LevyModel& levy, int n);

/// m^(-n)_q = m^(-1)_q ((-1)^{n-1}/(n-1)!) prod_{k=1}^{n-1} (q + Phi(-k)).
/// Requires q + Phi(-k) < 0 so that the output is a positive transform;
/// otherwise PreconditionError("NEG_LC_SIGN").
double negative_laplace_carson(const LevyModel& levy, double q, int n, double base_minus_one);

}  // namespace expfunc
