#pragma once

#include <vector>

#include "expfunc/common.hpp"
#include "expfunc/moments.hpp"
#include "expfunc/pii.hpp"

namespace expfunc {

/// m^(k)_{s,t} for k = 0..n on a uniform grid s_0 = 0 < ... < s_{N-1} = t.
struct ShiftedMomentGrid {
  double horizon = 0.0;
  std::vector<double> s;
  /// values[k][j] = m^(k)_{s_j, t}; values[0] is identically 1.
  std::vector<std::vector<double>> values;
};

struct QuadratureRecursionOptions {
  int initial_points = 129;
  int max_points = 8193;
  double relative_tolerance = 1e-6;
  Execution execution = Execution::Parallel;
};

/// Phi(s_j, k) for k = 0..n on the grid, exact for homogeneous and
/// time-changed processes and cumulative quadrature of H otherwise.
/// Throws PreconditionError("PHI_DIVERGENT") when some order diverges.
std::vector<std::vector<double>> exponent_grid(const PiiCharacteristics& pii, const std::vector<double>& s, int n);

/// One sweep of the backward recursion
///     m^(k)_{s,t} = k int_s^t m^(k-1)_{u,t} e^{-(Phi(u,k) - Phi(s,k))} du
/// on a fixed grid of `points` nodes.
ShiftedMomentGrid shifted_moment_grid(const PiiCharacteristics& pii, double t, int n, int points,
                                      Execution execution = Execution::Parallel);

/// Same recursion on a precomputed exponent grid (phi[k][j]); exposed for
/// the serial/parallel benchmark.
std::vector<std::vector<double>> shifted_recursion(const std::vector<std::vector<double>>& phi, double h,
                                                   Execution execution);

/// Ladder m^(k)_{0,t}, k = 1..n, refining the grid (N -> 2N - 1) until the
/// top order changes by less than the tolerance. Refuses with
/// COND_RT1_VIOLATED; warns COND_RT1_UNKNOWN and QUADRATURE_TOLERANCE_NOT_REACHED.
MomentLadder pii_moment_quadrature(const PiiCharacteristics& pii, double t, int n,
                                   const QuadratureRecursionOptions& opts = {});

}  // namespace expfunc
