#pragma once

// Reference computations that share no code with the library: plain
// composite Simpson rules and brute-force simplex integrals.

#include <cmath>
#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

namespace oracle {

template <class F>
double simpson(F&& f, double a, double b, int intervals = 2000) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

// E I_t for a Levy process with Phi(1) = p1.
inline double levy_first_moment(double p1, double t) {
  return simpson([&](double s) { return std::exp(-p1 * s); }, 0.0, t);
}

// E I_t^2 = 2 int_0^t int_s^t E exp(-X_s - X_u) du ds
//         = 2 int_0^t exp(-p2 s) int_s^t exp(-p1 (u - s)) du ds.
inline double levy_second_moment(double p1, double p2, double t) {
  auto inner = [&](double s) {
    return std::exp(-p2 * s) * simpson([&](double u) { return std::exp(-p1 * (u - s)); }, s, t, 400);
  };
  return 2.0 * simpson(inner, 0.0, t, 400);
}

// E I_t for a process with independent increments and cumulative exponent
// Phi(s, 1) given by `phi1`.
template <class F>
double pii_first_moment(F&& phi1, double t) {
  return simpson([&](double s) { return std::exp(-phi1(s)); }, 0.0, t);
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline std::string spec_path(const std::string& name) { return std::string(EXPFUNC_SPEC_DIR) + "/" + name; }

inline std::vector<std::string> corpus() {
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(EXPFUNC_SPEC_DIR))
    if (e.path().extension() == ".json") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace oracle
