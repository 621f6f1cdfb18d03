#pragma once

#include <optional>
#include <vector>

namespace expfunc {

struct SplineFit {
  std::vector<double> fitted;
  std::vector<double> derivative;
  /// Standard deviation of the derivative propagated from the data errors
  /// through the (linear) smoother; zero when no errors were supplied.
  std::vector<double> derivative_std;
  double lambda = 0.0;
  double cv_score = 0.0;
};

/// Natural cubic smoothing spline through (x_i, y_i) with weights 1/se_i^2
/// (unit weights when `se` is empty or contains a zero), minimizing
/// sum w_i (y_i - f(x_i))^2 + lambda int f''^2. Without an explicit lambda it
/// is chosen by exact leave-one-out cross-validation. Needs >= 4 strictly
/// increasing knots.
SplineFit fit_smoothing_spline(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<double>& se = {}, std::optional<double> lambda = {});

}  // namespace expfunc
