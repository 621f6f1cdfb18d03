#pragma once

#include <optional>
#include <string>
#include <vector>

#include "expfunc/pii.hpp"

namespace expfunc {

/// Samples of s -> m^(-1)_{s,t} with standard errors (zero for exact data).
struct BaseCurve {
  std::vector<double> s;
  std::vector<double> value;
  std::vector<double> std_error;
};

struct NegativeLadder {
  double horizon = 0.0;
  std::vector<double> s;
  /// values[k-1][j] = m^(-k)_{s_j,t}; errors likewise.
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> errors;
  /// First order whose values are not positive or whose error exceeds the
  /// value; the ladder stops above it.
  std::optional<int> failure_order;
  std::vector<std::string> warnings;

  int depth() const { return static_cast<int>(values.size()); }
};

/// Descends m^(-k-1)_{s,t} = (d/ds m^(-k)_{s,t} - m^(-k)_{s,t} H^(-k)_s) / k
/// from the supplied m^(-1) curve, differentiating each level with a
/// cross-validated smoothing spline. Needs 0 < s_j < t and >= 4 samples.
/// Refuses with COND_RT11_VIOLATED; warns COND_RT11_UNKNOWN.
NegativeLadder negative_moment_ode(const PiiCharacteristics& pii, double t, int n, const BaseCurve& base);

}  // namespace expfunc
