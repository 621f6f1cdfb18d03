#pragma once

#include <functional>

namespace expfunc {

struct QuadratureTolerance {
  double absolute = 1e-10;
  double relative = 1e-8;
  int max_subdivisions = 500;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
  int evaluations = 0;
};

using ScalarFunction = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. Nodes are interior, so integrable
/// endpoint singularities are tolerated.
QuadratureResult integrate(const ScalarFunction& f, double a, double b,
                           const QuadratureTolerance& tol = {});

/// Integral over [a, inf) through x = a + u/(1-u).
QuadratureResult integrate_upper_tail(const ScalarFunction& f, double a,
                                      const QuadratureTolerance& tol = {});

/// Integral over (-inf, b].
QuadratureResult integrate_lower_tail(const ScalarFunction& f, double b,
                                      const QuadratureTolerance& tol = {});

/// Integral over [a, b] with either bound possibly infinite.
QuadratureResult integrate_range(const ScalarFunction& f, double a, double b,
                                 const QuadratureTolerance& tol = {});

/// Same as integrate_range but throws IntegrationError when not converged.
double integrate_or_throw(const ScalarFunction& f, double a, double b,
                          const QuadratureTolerance& tol = {});

}  // namespace expfunc
