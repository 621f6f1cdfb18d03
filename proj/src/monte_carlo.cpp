#include "expfunc/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

namespace expfunc {
namespace {

// Simpson's rule on one cell.
double cell_integral(const ScalarFunction& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

double segment_integral(double drift, double length) {
  const double x = drift * length;
  if (std::abs(x) < 1e-12) return length;
  return -std::expm1(-x) / drift;
}

// Michael, Schucany and Haas (1976).
double inverse_gaussian(Philox& rng, double mean, double shape) {
  std::normal_distribution<double> normal;
  const double v = normal(rng);
  const double y = v * v;
  const double x = mean + mean * mean * y / (2.0 * shape) -
                   mean / (2.0 * shape) * std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
  return rng.uniform() <= mean / (mean + x) ? x : mean * mean / x;
}

// Fixed-order blocked summation, independent of the thread count.
double blocked_sum(const std::vector<double>& v) {
  constexpr std::size_t kBlock = 4096;
  double total = 0.0;
  for (std::size_t start = 0; start < v.size(); start += kBlock) {
    double partial = 0.0;
    const std::size_t end = std::min(v.size(), start + kBlock);
    for (std::size_t i = start; i < end; ++i) partial += v[i];
    total += partial;
  }
  return total;
}

double power_stat(double x, double alpha) { return alpha == 0.0 ? 1.0 : std::pow(x, alpha); }
double laplace_stat(double x, double beta) { return std::exp(-beta * x); }

}  // namespace

void SimulationConfig::validate() const {
  if (n_paths < 2) throw SpecError("n_paths must be >= 2");
  if (!(time_step > 0.0)) throw SpecError("time_step must be positive");
  if (!(horizon >= 0.0)) throw SpecError("horizon must be >= 0");
  if (!(small_jump_cutoff > 0.0)) throw SpecError("small_jump_cutoff must be positive");
}

PathSimulator::PathSimulator(const PiiCharacteristics& pii, const SimulationConfig& config)
    : config_(config), base_(pii.canonical().base) {
  config_.validate();
  const ItoCharacteristics c = pii.canonical();
  const LevyTriplet* triplet = base_.triplet();
  triplet_base_ = triplet != nullptr;

  if (triplet_base_ && !triplet->jumps.is_zero()) {
    const JumpMeasure& k = triplet->jumps;
    if (const auto* g = std::get_if<GeneralDensity>(&k.repr())) {
      if (!g->envelope || !std::isfinite(g->lower) || !std::isfinite(g->upper))
        throw SpecError("general_density jumps need an envelope and finite bounds to be simulated");
    }
    const JumpMeasure::Split split = k.split(config_.small_jump_cutoff);
    jump_ = {split.rate_above, split.mean_above, split.second_moment_below};
    if (const auto* atoms = std::get_if<std::vector<PointMass>>(&k.repr())) {
      double acc = 0.0;
      for (const auto& a : *atoms) {
        acc += a.rate;
        point_cdf_.push_back(acc);
        point_loc_.push_back(a.location);
      }
      for (double& p : point_cdf_) p /= acc;
    }
  }

  const bool eligible = pii.is_homogeneous() && triplet_base_ && triplet->c0 == 0.0 &&
                        (triplet->jumps.is_zero() || triplet->jumps.finite_activity());
  if (config_.scheme == PathScheme::Exact && !eligible)
    throw SpecError("exact scheme needs a homogeneous process with c0 = 0 and finite-activity jumps");
  exact_ = eligible && config_.scheme != PathScheme::Grid;
  if (exact_) exact_drift_ = triplet->finite_variation_drift();

  const double t = config_.horizon;
  const int n = t == 0.0 ? 0 : std::max(1, static_cast<int>(std::ceil(t / config_.time_step - 1e-9)));
  dt_ = n == 0 ? 0.0 : t / n;
  drift_.resize(n);
  variance_.resize(n);
  clock_.resize(n);
  scale_.resize(n);
  const double b0 = triplet_base_ ? triplet->b0 : 0.0;
  const double c0 = triplet_base_ ? triplet->c0 : 0.0;
  auto kg = [&](double s) { return c.jump_rate(s) * c.jump_scale(s); };
  auto kg2 = [&](double s) { return c.jump_rate(s) * c.jump_scale(s) * c.jump_scale(s); };
  for (int i = 0; i < n; ++i) {
    const double a = t * i / n, b = t * (i + 1) / n;
    const double e = cell_integral(c.drift, a, b);
    const double v = cell_integral(c.variance, a, b);
    clock_[i] = cell_integral(c.jump_rate, a, b);
    scale_[i] = c.jump_scale(0.5 * (a + b));
    if (triplet_base_) {
      const double g1 = cell_integral(kg, a, b);
      const double g2 = cell_integral(kg2, a, b);
      drift_[i] = e + (b0 - jump_.mean_above) * g1;
      variance_[i] = v + c0 * g2 + (config_.gaussian_compensation ? jump_.small_var * g2 : 0.0);
    } else {
      drift_[i] = e;
      variance_[i] = v;
    }
    variance_[i] = std::max(0.0, variance_[i]);
  }
}

double PathSimulator::sample_jump(Philox& rng) const {
  const auto& repr = base_.triplet()->jumps.repr();
  if (!point_cdf_.empty()) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(point_cdf_.begin(), point_cdf_.end(), u);
    return point_loc_[std::min<std::size_t>(it - point_cdf_.begin(), point_loc_.size() - 1)];
  }
  if (const auto* g = std::get_if<GaussianJumps>(&repr)) {
    std::normal_distribution<double> normal(g->mean, g->std);
    return normal(rng);
  }
  const double eps = config_.small_jump_cutoff;
  if (const auto* ts = std::get_if<TemperedStable>(&repr)) {
    // Pareto(eps, index) proposal, accepted with probability e^{-decay (x - eps)}.
    for (;;) {
      const double x = eps * std::pow(rng.uniform(), -1.0 / ts->index);
      if (rng.uniform() <= std::exp(-ts->decay * (x - eps))) return x;
    }
  }
  const auto& g = std::get<GeneralDensity>(repr);
  for (;;) {
    const double x = g.lower + (g.upper - g.lower) * rng.uniform();
    if (std::abs(x) <= eps) continue;
    if (rng.uniform() * *g.envelope <= g.density(x)) return x;
  }
}

double PathSimulator::sample_base_increment(Philox& rng, double clock) const {
  if (clock <= 0.0) return 0.0;
  if (!triplet_base_) {
    const auto& sb = std::get<SubordinatedBrownian>(base_.repr());
    const double tau = inverse_gaussian(rng, clock / sb.b, clock * clock);
    std::normal_distribution<double> normal;
    return sb.mu * tau + sb.sigma * std::sqrt(tau) * normal(rng);
  }
  if (jump_.rate <= 0.0) return 0.0;
  std::poisson_distribution<long> count(jump_.rate * clock);
  const long jumps = count(rng);
  double sum = 0.0;
  for (long j = 0; j < jumps; ++j) sum += sample_jump(rng);
  return sum;
}

template <class Visit>
void PathSimulator::walk(std::uint64_t path_id, Visit&& visit) const {
  Philox rng(config_.rng_seed, path_id);
  std::normal_distribution<double> normal;
  double x = 0.0;
  const int n = cells();
  for (int i = 0; i < n; ++i) {
    double inc = drift_[i];
    if (variance_[i] > 0.0) inc += std::sqrt(variance_[i]) * normal(rng);
    inc += scale_[i] * sample_base_increment(rng, clock_[i]);
    const double next = x + inc;
    visit(x, next);
    x = next;
  }
}

double PathSimulator::exact_functional(std::uint64_t path_id) const {
  Philox rng(config_.rng_seed, path_id);
  const double t = config_.horizon;
  const double rate = jump_.rate;
  std::exponential_distribution<double> wait(rate > 0.0 ? rate : 1.0);
  double time = 0.0, x = 0.0, acc = 0.0;
  while (time < t) {
    const double gap = rate > 0.0 ? wait(rng) : t;
    const double length = std::min(gap, t - time);
    acc += std::exp(-x) * segment_integral(exact_drift_, length);
    x += exact_drift_ * length;
    time += length;
    if (time >= t) break;
    x += sample_jump(rng);
  }
  return std::isfinite(acc) ? acc : std::nan("");
}

std::vector<double> PathSimulator::path(std::uint64_t path_id) const {
  const int n = cells();
  std::vector<double> xs(n + 1, 0.0);
  if (!exact_) {
    int i = 0;
    walk(path_id, [&](double, double next) { xs[++i] = next; });
    return xs;
  }
  // Same draws as exact_functional, read off at the grid points.
  Philox rng(config_.rng_seed, path_id);
  const double t = config_.horizon;
  const double rate = jump_.rate;
  std::exponential_distribution<double> wait(rate > 0.0 ? rate : 1.0);
  double time = 0.0, x = 0.0;
  int next_point = 1;
  while (time < t) {
    const double gap = rate > 0.0 ? wait(rng) : t;
    const double end = std::min(time + gap, t);
    while (next_point <= n && dt_ * next_point <= end) {
      xs[next_point] = x + exact_drift_ * (dt_ * next_point - time);
      ++next_point;
    }
    x += exact_drift_ * (end - time);
    time = end;
    if (time >= t) break;
    x += sample_jump(rng);
  }
  for (; next_point <= n; ++next_point) xs[next_point] = x;
  return xs;
}

double PathSimulator::functional(std::uint64_t path_id) const {
  if (exact_) return exact_functional(path_id);
  double acc = 0.0;
  const double half = 0.5 * dt_;
  walk(path_id, [&](double x0, double x1) { acc += half * (std::exp(-x0) + std::exp(-x1)); });
  return std::isfinite(acc) ? acc : std::nan("");
}

double PathSimulator::reversed_functional(std::uint64_t path_id) const {
  // acc = int_0^s e^{Y_u - Y_s} du, rescaled at every step so nothing overflows.
  double acc = 0.0;
  const double half = 0.5 * dt_;
  auto step = [&](double y0, double y1) {
    const double r = std::exp(y0 - y1);
    acc = acc * r + half * (r + 1.0);
  };
  if (exact_) {
    const std::vector<double> ys = path(path_id);
    for (std::size_t i = 1; i < ys.size(); ++i) step(ys[i - 1], ys[i]);
  } else {
    walk(path_id, step);
  }
  return std::isfinite(acc) ? acc : std::nan("");
}

std::vector<double> functional_samples(const PiiCharacteristics& pii, const SimulationConfig& config, bool reversed) {
  const PathSimulator sim(pii, config);
  std::vector<double> out(config.n_paths);
  const long n = config.n_paths;
  auto one = [&](long p) {
    out[p] = reversed ? sim.reversed_functional(static_cast<std::uint64_t>(p))
                      : sim.functional(static_cast<std::uint64_t>(p));
  };
  if (config.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 256)
    for (long p = 0; p < n; ++p) one(p);
  } else {
    for (long p = 0; p < n; ++p) one(p);
  }
  return out;
}

McEstimate summarize(const std::vector<double>& samples, double (*f)(double, double), double parameter,
                     const SimulationConfig& config) {
  std::vector<double> values;
  values.reserve(samples.size());
  long flagged = 0;
  for (double s : samples) {
    const double v = std::isnan(s) ? s : f(s, parameter);
    if (!std::isfinite(v)) {
      ++flagged;
      continue;
    }
    values.push_back(v);
  }
  McEstimate est;
  est.config = config;
  est.n_paths = static_cast<long>(values.size());
  est.flagged_paths = flagged;
  if (values.empty()) {
    est.mean = std::nan("");
    return est;
  }
  est.mean = blocked_sum(values) / static_cast<double>(values.size());
  for (double& v : values) v = (v - est.mean) * (v - est.mean);
  if (values.size() > 1) {
    const double var = blocked_sum(values) / static_cast<double>(values.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return est;
}

McEstimate estimate_functional_moment(const PiiCharacteristics& pii, double t, double alpha, SimulationConfig config) {
  config.horizon = t;
  config.validate();
  if (alpha == 0.0) {
    McEstimate est;
    est.mean = 1.0;
    est.n_paths = config.n_paths;
    est.config = config;
    return est;
  }
  return summarize(functional_samples(pii, config), power_stat, alpha, config);
}

McEstimate estimate_infinite(const LevyModel& levy, double alpha, std::optional<double> beta,
                             const SimulationConfig& config, bool override_refusal) {
  config.validate();
  const Extended phi1 = levy.exponent(1.0);
  const bool positive = phi1.greater_than(0.0);
  if (!positive && !override_refusal)
    throw PreconditionError("PHI1_NOT_POSITIVE", "Phi(1) <= 0, so the truncation remainder is not controlled");
  const PiiCharacteristics pii = PiiCharacteristics::homogeneous(levy);
  McEstimate est;
  if (beta) {
    if (*beta == 0.0) {
      est.mean = 1.0;
      est.n_paths = config.n_paths;
      est.config = config;
    } else {
      est = summarize(functional_samples(pii, config), laplace_stat, *beta, config);
    }
  } else if (alpha == 0.0) {
    est.mean = 1.0;
    est.n_paths = config.n_paths;
    est.config = config;
  } else {
    est = summarize(functional_samples(pii, config), power_stat, alpha, config);
  }
  const double t = config.horizon;
  if (positive) {
    est.tail_bound = std::exp(-phi1.value() * t) / phi1.value();
    est.tail_bound_note = "E(I_inf - I_T) = exp(-Phi(1) T)/Phi(1)";
  } else {
    est.tail_bound_note = "Phi(1) <= 0: no remainder bound, I_inf may be infinite";
  }
  if (beta)
    est.tail_bound_note += "; I_T <= I_inf biases E exp(-beta I_T) upward";
  else if (alpha < 0.0)
    est.tail_bound_note += "; I_T <= I_inf biases negative moments upward";
  else if (alpha > 0.0)
    est.tail_bound_note += "; I_T <= I_inf biases positive moments downward";
  return est;
}

McEstimate estimate_reversed(const PiiCharacteristics& pii, double t, double n, SimulationConfig config) {
  config.horizon = t;
  config.validate();
  if (n == 0.0) {
    McEstimate est;
    est.mean = 1.0;
    est.n_paths = config.n_paths;
    est.config = config;
    return est;
  }
  if (!(t > 0.0)) throw std::invalid_argument("estimate_reversed: t must be positive");
  const PiiCharacteristics reversed = reverse_characteristics(pii, t).as_pii();
  return summarize(functional_samples(reversed, config, true), power_stat, n, config);
}

RatioEstimate estimate_moment_ratio(const std::vector<double>& samples, double a, double b,
                                    const SimulationConfig& config) {
  RatioEstimate r;
  r.numerator = summarize(samples, power_stat, a, config);
  r.denominator = summarize(samples, power_stat, b, config);
  std::vector<double> cross;
  cross.reserve(samples.size());
  for (double s : samples) {
    if (std::isnan(s)) continue;
    const double u = power_stat(s, a), v = power_stat(s, b);
    if (std::isfinite(u) && std::isfinite(v))
      cross.push_back((u - r.numerator.mean) * (v - r.denominator.mean));
  }
  const double n = static_cast<double>(cross.size());
  const double cov = n > 1 ? blocked_sum(cross) / (n - 1) / n : 0.0;  // covariance of the two means
  const double ma = r.numerator.mean, mb = r.denominator.mean;
  const double va = r.numerator.std_error * r.numerator.std_error;
  const double vb = r.denominator.std_error * r.denominator.std_error;
  r.ratio = ma / mb;
  const double var = va / (mb * mb) - 2.0 * ma * cov / (mb * mb * mb) + ma * ma * vb / (mb * mb * mb * mb);
  r.std_error = std::sqrt(std::max(0.0, var));
  return r;
}

void write_path_csv(std::ostream& out, const std::vector<double>& samples) {
  out << "path_id,value\n";
  char buf[64];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, samples[i]);
    out << buf;
  }
}

}  // namespace expfunc
