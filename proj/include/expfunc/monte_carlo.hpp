#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "expfunc/common.hpp"
#include "expfunc/pii.hpp"
#include "expfunc/rng.hpp"

namespace expfunc {

enum class PathScheme {
  Auto,   // Exact when eligible, Grid otherwise
  Grid,   // increments on {0, dt, 2 dt, ..., t}, trapezoid rule on e^{-X}
  Exact,  // event-driven: homogeneous, c0 = 0, finite-activity jumps
};

struct SimulationConfig {
  long n_paths = 100000;
  double time_step = 1e-3;
  double horizon = 1.0;
  double small_jump_cutoff = 1e-3;
  std::uint64_t rng_seed = 20240601;
  bool gaussian_compensation = false;
  PathScheme scheme = PathScheme::Auto;
  Execution execution = Execution::Parallel;

  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_paths = 0;
  /// Paths whose functional overflowed; excluded from mean and SE.
  long flagged_paths = 0;
  SimulationConfig config;
  /// Infinite-horizon runs: the analytic remainder bound and a note on the
  /// direction of the truncation bias.
  std::optional<double> tail_bound;
  std::string tail_bound_note;
};

/// Simulates one process; all per-cell characteristic integrals are
/// tabulated once and shared by every path.
class PathSimulator {
 public:
  PathSimulator(const PiiCharacteristics& pii, const SimulationConfig& config);

  bool exact() const { return exact_; }
  int cells() const { return static_cast<int>(drift_.size()); }
  const SimulationConfig& config() const { return config_; }

  /// X on the grid {0, dt, ..., t}. In exact mode the path is sampled at the
  /// same grid from the event-driven construction.
  std::vector<double> path(std::uint64_t path_id) const;
  /// I_t = int_0^t e^{-X_s} ds; NaN marks an overflowed path.
  double functional(std::uint64_t path_id) const;
  /// e^{-Y_t} int_0^t e^{Y_s} ds for Y the simulated process.
  double reversed_functional(std::uint64_t path_id) const;

 private:
  struct Jump {
    double rate;        // base-clock rate of jumps kept by the cutoff
    double mean_above;  // compensator of the kept jumps
    double small_var;   // second moment of the dropped jumps
  };
  template <class Visit>
  void walk(std::uint64_t path_id, Visit&& visit) const;
  double exact_functional(std::uint64_t path_id) const;
  double sample_jump(Philox& rng) const;
  double sample_base_increment(Philox& rng, double clock) const;

  SimulationConfig config_;
  LevyModel base_;
  bool exact_ = false;
  bool triplet_base_ = true;
  Jump jump_{};
  double dt_ = 0.0;
  std::vector<double> drift_, variance_, clock_, scale_;
  std::vector<double> point_cdf_, point_loc_;
  double exact_drift_ = 0.0;
};

/// Per-path I_t (or reversed functionals) in path-id order; identical for
/// serial and parallel execution.
std::vector<double> functional_samples(const PiiCharacteristics& pii, const SimulationConfig& config,
                                       bool reversed = false);

/// Mean and SE of f(sample) over non-NaN samples, fixed summation order.
McEstimate summarize(const std::vector<double>& samples, double (*f)(double, double), double parameter,
                     const SimulationConfig& config);

McEstimate estimate_functional_moment(const PiiCharacteristics& pii, double t, double alpha,
                                      SimulationConfig config);

/// E(I_T^alpha) (or E e^{-beta I_T} when beta is set) at the truncation
/// horizon config.horizon, with tail bound e^{-Phi(1) T}/Phi(1). Refuses
/// with PHI1_NOT_POSITIVE when Phi(1) <= 0 unless `override_refusal`.
McEstimate estimate_infinite(const LevyModel& levy, double alpha, std::optional<double> beta,
                             const SimulationConfig& config, bool override_refusal = false);

/// E(I_t^n) through the reversed process: e^{-Y_t} int_0^t e^{Y_s} ds.
McEstimate estimate_reversed(const PiiCharacteristics& pii, double t, double n, SimulationConfig config);

/// E(I^a) / E(I^b) from one set of paths with a delta-method SE.
struct RatioEstimate {
  double ratio = 0.0;
  double std_error = 0.0;
  McEstimate numerator;
  McEstimate denominator;
};
RatioEstimate estimate_moment_ratio(const std::vector<double>& samples, double a, double b,
                                    const SimulationConfig& config);

/// CSV with columns path_id,value.
void write_path_csv(std::ostream& out, const std::vector<double>& samples);

}  // namespace expfunc
