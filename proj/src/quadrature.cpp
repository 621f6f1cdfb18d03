#include "expfunc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "expfunc/common.hpp"

namespace expfunc {
namespace {

// Kronrod 15-point nodes/weights with embedded Gauss 7-point weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const ScalarFunction& f, double a, double b, int& evals, bool& finite) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  finite = finite && std::isfinite(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    finite = finite && std::isfinite(f1) && std::isfinite(f2);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  evals += 15;
  const double value = kron * h;
  const double err = std::abs((kron - gauss) * h);
  return {a, b, value, err};
}

}  // namespace

QuadratureResult integrate(const ScalarFunction& f, double a, double b, const QuadratureTolerance& tol) {
  QuadratureResult r;
  if (a == b) {
    r.converged = true;
    return r;
  }
  if (b < a) {
    r = integrate(f, b, a, tol);
    r.value = -r.value;
    return r;
  }
  bool finite = true;
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b, r.evaluations, finite);
  heap.push(first);
  double total = first.value;
  double error = first.error;
  int subdivisions = 0;
  while (finite && error > std::max(tol.absolute, tol.relative * std::abs(total)) &&
         subdivisions < tol.max_subdivisions) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;  // interval cannot be split further
    }
    Segment left = gk15(f, worst.a, mid, r.evaluations, finite);
    Segment right = gk15(f, mid, worst.b, r.evaluations, finite);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum to limit cancellation drift from the running updates.
  total = 0.0;
  error = 0.0;
  std::vector<Segment> segs;
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : segs) {
    total += s.value;
    error += s.error;
  }
  r.value = total;
  r.abs_error = error;
  r.converged = finite && error <= std::max(tol.absolute, tol.relative * std::abs(total));
  if (!finite) r.value = std::numeric_limits<double>::quiet_NaN();
  return r;
}

QuadratureResult integrate_upper_tail(const ScalarFunction& f, double a, const QuadratureTolerance& tol) {
  auto g = [&](double u) {
    const double one_minus = 1.0 - u;
    const double x = a + u / one_minus;
    const double v = f(x);
    if (v == 0.0) return 0.0;
    return v / (one_minus * one_minus);
  };
  return integrate(g, 0.0, 1.0, tol);
}

QuadratureResult integrate_lower_tail(const ScalarFunction& f, double b, const QuadratureTolerance& tol) {
  auto mirrored = [&](double x) { return f(-x); };
  return integrate_upper_tail(mirrored, -b, tol);
}

QuadratureResult integrate_range(const ScalarFunction& f, double a, double b, const QuadratureTolerance& tol) {
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return integrate(f, a, b, tol);
  if (lo_inf && !hi_inf) return integrate_lower_tail(f, b, tol);
  if (!lo_inf && hi_inf) return integrate_upper_tail(f, a, tol);
  QuadratureResult left = integrate_lower_tail(f, 0.0, tol);
  QuadratureResult right = integrate_upper_tail(f, 0.0, tol);
  return {left.value + right.value, left.abs_error + right.abs_error, left.converged && right.converged,
          left.evaluations + right.evaluations};
}

double integrate_or_throw(const ScalarFunction& f, double a, double b, const QuadratureTolerance& tol) {
  QuadratureResult r = integrate_range(f, a, b, tol);
  if (!r.converged) {
    throw IntegrationError("quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                           "] did not converge (estimate " + std::to_string(r.value) + ", error " +
                           std::to_string(r.abs_error) + ")");
  }
  return r.value;
}

}  // namespace expfunc
