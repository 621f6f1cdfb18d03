// Serial reference kernels against their OpenMP versions: the shifted-moment
// recursion on a fixed grid and Monte Carlo functional samples.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "expfunc/monte_carlo.hpp"
#include "expfunc/shifted_moments.hpp"

using namespace expfunc;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void report(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-34s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  identical %s\n", name, serial, parallel,
              serial / parallel, identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  const int points = argc > 1 ? std::stoi(argv[1]) : 4097;
  const long paths = argc > 2 ? std::stol(argv[2]) : 200000;
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());

  const PiiCharacteristics tc =
      PiiCharacteristics::time_changed(LevyTriplet::brownian(1.0, 0.5), Expression::parse("2*log(1+t)"));
  const double t = 3.0;
  std::vector<double> s(points);
  for (int j = 0; j < points; ++j) s[j] = t * j / (points - 1);
  const auto phi = exponent_grid(tc, s, 4);
  const double h = t / (points - 1);
  std::vector<std::vector<double>> a, b;
  const double qs = best_of(3, [&] { a = shifted_recursion(phi, h, Execution::Serial); });
  const double qp = best_of(3, [&] { b = shifted_recursion(phi, h, Execution::Parallel); });
  bool identical = a.size() == b.size();
  for (std::size_t k = 0; identical && k < a.size(); ++k) identical = same_bits(a[k], b[k]);
  report(("shifted recursion N=" + std::to_string(points) + " n=4").c_str(), qs, qp, identical);

  const PiiCharacteristics poisson = PiiCharacteristics::nonhom_poisson(Expression::parse("1 + t"));
  for (const auto& [name, pii] : {std::pair{"MC grid, Poisson(1+t)", poisson}, std::pair{"MC grid, BM on 2 ln(1+t)", tc}}) {
    SimulationConfig c;
    c.n_paths = paths;
    c.time_step = 1e-3;
    c.horizon = 1.0;
    std::vector<double> x, y;
    c.execution = Execution::Serial;
    const double ms = best_of(1, [&] { x = functional_samples(pii, c); });
    c.execution = Execution::Parallel;
    const double mp = best_of(1, [&] { y = functional_samples(pii, c); });
    report((std::string(name) + " " + std::to_string(paths) + " paths").c_str(), ms, mp, same_bits(x, y));
  }
  return 0;
}
