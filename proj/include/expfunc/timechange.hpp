#pragma once

#include "expfunc/levy.hpp"
#include "expfunc/moments.hpp"

namespace expfunc {

struct TimechangeMoment {
  double value;
  /// ClosedForm for the Q_t(n, k) sum; OdeRecursion when rho(0..order) are
  /// confluent and the ladder is integrated in log time instead.
  Method method;
};

/// E(I_t^order) for X_t = L_{r ln(1+t)}, order >= 1, with
/// rho(k) = r Phi(k) - k and gamma(n, k) = n - k - r(Phi(n+1) - Phi(k)).
/// gamma(n, k) = -1 uses the continuous limit ln(1+t) of the Q_t numerator.
/// Substituting v = ln(1+s) turns the time-changed moments into the Levy
/// ladder with exponents rho(k) over horizon ln(1+t); that ladder is the
/// fallback at confluent rho values. Throws PreconditionError("PHI_DIVERGENT").
TimechangeMoment timechange_log_moments(const LevyModel& base, double r, double t, int order);

}  // namespace expfunc
