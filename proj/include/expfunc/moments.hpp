#pragma once

#include <string>
#include <vector>

#include "expfunc/levy.hpp"

namespace expfunc {

enum class Method { ClosedForm, OdeRecursion, Quadrature, McSeeded };

const char* to_string(Method m);

/// Moments m^(k) = E(I_t^k) for k = 1..n at one horizon.
struct MomentLadder {
  struct Entry {
    int order;
    double value;
    Method method;
    double error_estimate;
    bool available = true;  // false when the order's exponent diverges
  };

  double horizon;
  std::vector<Entry> entries;
  /// Machine-readable condition codes (e.g. COND_RT1_UNKNOWN).
  std::vector<std::string> warnings;

  const Entry& at(int order) const;
  double value(int order) const { return at(order).value; }
};

/// E(I_t^n) from the divided-difference closed form. Throws
/// NearConfluentError when Phi(0..n) are not separated by 1e-9 max|Phi|, and
/// PreconditionError when any Phi(k) diverges.
double levy_moment_closed_form(const LevyModel& levy, double t, int n);

/// The same expression written as n! (-1)^n f[Phi(0), ..., Phi(n)] with
/// f(x) = e^{-x t}, evaluated by a Hermite divided-difference table so that
/// coincident exponents (gaps below 1e-9 max|Phi|) take the confluent limit.
double levy_moment_divided_difference(const LevyModel& levy, double t, int n);

struct OdeOptions {
  double base_step = 1e-3;
  double stiffness_limit = 0.1;  // max_k |Phi(k)| h
  double relative_tolerance = 1e-9;
  long max_steps = 1L << 26;
};

struct LadderSolution {
  std::vector<double> values;  // m^(0..n)
  std::vector<double> errors;
  bool converged = true;
};

/// Solves d/dt m^(k) = -phi[k] m^(k) + k m^(k-1) on [0, t] for given finite
/// exponents phi[0..n] (phi[0] = 0).
LadderSolution exponent_ladder_ode(const std::vector<double>& phi, double t, const OdeOptions& opts = {});

/// Integrates d/dt m^(k) = -Phi(k) m^(k) + k m^(k-1), m^(0) = 1, m^(k)_0 = 0,
/// with classical RK4 and step halving + Richardson extrapolation.
MomentLadder levy_moment_ode(const LevyModel& levy, double t, int n, const OdeOptions& opts = {});

}  // namespace expfunc
