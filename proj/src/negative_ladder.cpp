#include "expfunc/negative_ladder.hpp"

#include <cmath>
#include <stdexcept>

#include "expfunc/smoothing_spline.hpp"

namespace expfunc {

NegativeLadder negative_moment_ode(const PiiCharacteristics& pii, double t, int n, const BaseCurve& base) {
  if (n < 1) throw std::invalid_argument("negative_moment_ode: n must be >= 1");
  const std::size_t size = base.s.size();
  if (base.value.size() != size || (!base.std_error.empty() && base.std_error.size() != size))
    throw std::invalid_argument("negative_moment_ode: base curve arrays differ in length");
  for (double s : base.s)
    if (!(s > 0.0 && s < t)) throw std::invalid_argument("negative_moment_ode: need 0 < s < t for every sample");

  NegativeLadder ladder;
  ladder.horizon = t;
  ladder.s = base.s;
  ladder.values.push_back(base.value);
  ladder.errors.push_back(base.std_error.empty() ? std::vector<double>(size, 0.0) : base.std_error);
  if (n == 1) return ladder;
  if (size < 4) throw std::invalid_argument("negative_moment_ode: need at least 4 samples to differentiate");

  const Verdict v = check_moment_ladder_condition(pii, t, -static_cast<double>(n));
  if (v == Verdict::Violated)
    throw PreconditionError("COND_RT11_VIOLATED",
                            "positive-jump exponential moment fails at order " + std::to_string(n + 1));
  if (v == Verdict::Unknown) ladder.warnings.push_back("COND_RT11_UNKNOWN");

  for (int k = 1; k < n; ++k) {
    const std::vector<double>& m = ladder.values[k - 1];
    const std::vector<double>& err = ladder.errors[k - 1];
    const SplineFit fit = fit_smoothing_spline(ladder.s, m, err);
    std::vector<double> next(size), next_err(size);
    bool failed = false;
    for (std::size_t j = 0; j < size; ++j) {
      const Extended h = h_alpha(pii, ladder.s[j], -static_cast<double>(k));
      if (!h.is_finite())
        throw PreconditionError("NEG_PHI_DIVERGENT", "H^(-" + std::to_string(k) + ") diverges");
      next[j] = (fit.derivative[j] - m[j] * h.value()) / k;
      next_err[j] = (fit.derivative_std[j] + std::abs(h.value()) * err[j]) / k;
      if (!(next[j] > 0.0) || next_err[j] >= next[j]) failed = true;
    }
    if (failed) {
      ladder.failure_order = -(k + 1);
      ladder.warnings.push_back("NEG_LADDER_TOO_NOISY_ORDER_" + std::to_string(k + 1));
      break;
    }
    ladder.values.push_back(std::move(next));
    ladder.errors.push_back(std::move(next_err));
  }
  return ladder;
}

}  // namespace expfunc
