#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "expfunc/finiteness.hpp"
#include "expfunc/moments.hpp"
#include "expfunc/monte_carlo.hpp"
#include "expfunc/quadrature.hpp"
#include "expfunc/shifted_moments.hpp"
#include "expfunc/spec_io.hpp"
#include "expfunc/transforms.hpp"
#include "report.hpp"

using namespace expfunc;
using cli::RunReport;
using nlohmann::json;

namespace {

constexpr int kExitPrecondition = 1;
constexpr int kExitSpec = 2;

struct Options {
  std::string spec_path;
  std::string format;
  std::uint64_t seed = 20240601;

  std::vector<double> t{1.0};
  int n = 3;
  std::string method = "auto";
  std::string sign = "both";
  std::vector<double> beta{0.5};
  std::vector<double> q{1.0};
  double tol = 1e-10;
  int max_terms = 100000;

  long paths = 100000;
  double dt = 1e-3;
  double eps = 1e-3;
  bool gauss_comp = false;
  std::string scheme = "auto";
  bool serial = false;
  double alpha = 1.0;
  std::optional<double> mc_beta;
  double horizon_inf = 40.0;
  bool override_phi1 = false;
  std::string dump;
};

json number_or_inf(const Extended& e) {
  if (e.is_finite()) return e.value();
  return e.is_plus_infinity() ? "inf" : "-inf";
}

const LevyModel& require_levy(const PiiCharacteristics& pii) {
  if (!pii.is_homogeneous())
    throw PreconditionError("NOT_HOMOGENEOUS", "this command needs a homogeneous (Levy) process");
  return pii.levy();
}

SimulationConfig mc_config(const Options& o) {
  SimulationConfig c;
  c.n_paths = o.paths;
  c.time_step = o.dt;
  c.small_jump_cutoff = o.eps;
  c.rng_seed = o.seed;
  c.gaussian_compensation = o.gauss_comp;
  c.execution = o.serial ? Execution::Serial : Execution::Parallel;
  if (o.scheme == "auto")
    c.scheme = PathScheme::Auto;
  else if (o.scheme == "grid")
    c.scheme = PathScheme::Grid;
  else if (o.scheme == "exact")
    c.scheme = PathScheme::Exact;
  else
    throw std::invalid_argument("--scheme must be auto, grid or exact");
  c.validate();
  return c;
}

void moment_conditions(const PiiCharacteristics& pii, double t, int n, RunReport& report) {
  for (int k = 1; k <= n; ++k) {
    const Verdict v = check_moment_ladder_condition(pii, t, k);
    if (v == Verdict::Violated)
      throw PreconditionError("COND_RT1_VIOLATED",
                              "negative-jump exponential moment fails at order " + std::to_string(k + 1));
    if (v == Verdict::Unknown) report.warn("COND_RT1_UNKNOWN");
  }
}

void add_ladder(cli::Table& table, const MomentLadder& ladder, RunReport& report) {
  for (const auto& e : ladder.entries) {
    if (e.available)
      table.add({ladder.horizon, e.order, e.value, to_string(e.method), e.error_estimate});
    else
      table.add({ladder.horizon, e.order, nullptr, "unavailable", nullptr});
  }
  for (const auto& w : ladder.warnings) report.warn(w);
}

MomentLadder closed_ladder(const LevyModel& levy, double t, int n) {
  MomentLadder ladder{t, {}, {}};
  for (int k = 1; k <= n; ++k)
    ladder.entries.push_back({k, levy_moment_closed_form(levy, t, k), Method::ClosedForm, 0.0, true});
  return ladder;
}

void cmd_moments(const PiiCharacteristics& pii, const Options& o, RunReport& report) {
  if (o.n < 1) throw std::invalid_argument("--n must be >= 1");
  auto& table = report.table("moments", {"t", "order", "value", "method", "error_estimate"});
  for (double t : o.t) {
    if (!(t >= 0.0)) throw std::invalid_argument("--t must be >= 0");
    moment_conditions(pii, t, o.n, report);
    std::string method = o.method;
    if (method == "auto") method = pii.is_homogeneous() ? "closed" : "quadrature";
    if (method == "closed") {
      const LevyModel& levy = require_levy(pii);
      try {
        add_ladder(table, closed_ladder(levy, t, o.n), report);
      } catch (const NearConfluentError&) {
        if (o.method != "auto") throw;
        MomentLadder ladder{t, {}, {}};
        bool ok = true;
        for (int k = 1; k <= o.n && ok; ++k) {
          const double v = levy_moment_divided_difference(levy, t, k);
          ok = std::isfinite(v);
          ladder.entries.push_back({k, v, Method::ClosedForm, 0.0, true});
        }
        if (ok) {
          report.warn("NEAR_CONFLUENT_LIMIT");
          add_ladder(table, ladder, report);
        } else {
          report.warn("NEAR_CONFLUENT_FALLBACK_ODE");
          add_ladder(table, levy_moment_ode(levy, t, o.n), report);
        }
      } catch (const PreconditionError&) {
        if (o.method != "auto") throw;
        report.warn("CLOSED_FORM_FALLBACK_ODE");
        add_ladder(table, levy_moment_ode(levy, t, o.n), report);
      }
    } else if (method == "ode") {
      add_ladder(table, levy_moment_ode(require_levy(pii), t, o.n), report);
    } else if (method == "quadrature") {
      QuadratureRecursionOptions q;
      q.execution = o.serial ? Execution::Serial : Execution::Parallel;
      add_ladder(table, pii_moment_quadrature(pii, t, o.n, q), report);
    } else {
      throw std::invalid_argument("--method must be auto, closed, ode or quadrature");
    }
  }
}

void cmd_inf_moments(const PiiCharacteristics& pii, const Options& o, RunReport& report) {
  const LevyModel& levy = require_levy(pii);
  if (o.n < 1) throw std::invalid_argument("--n must be >= 1");
  auto& table = report.table("infinite_moments", {"order", "value", "finite"});
  for (int k = 1; k <= o.n; ++k) {
    const Extended v = infinite_moment(levy, k);
    table.add({k, number_or_inf(v), v.is_finite()});
  }
}

void cmd_finiteness(const PiiCharacteristics& pii, const Options& o, RunReport& report) {
  const LevyModel& levy = require_levy(pii);
  if (o.n < 1) throw std::invalid_argument("--n must be >= 1");
  if (o.sign != "positive" && o.sign != "negative" && o.sign != "both")
    throw std::invalid_argument("--sign must be positive, negative or both");
  auto& summary = report.table("summary", {"quantity", "value", "note"});
  auto& verdicts = report.table("verdicts", {"order", "finite"});
  if (o.sign != "negative") {
    const FinitenessReport r = positive_finiteness(levy, o.n);
    summary.add({"alpha0", number_or_inf(*r.alpha0), nullptr});
    for (const auto& v : r.verdicts) verdicts.add({v.order, v.finite});
    for (const auto& note : r.notes) report.warn(note);
  }
  if (o.sign != "positive") {
    const FinitenessReport r = negative_finiteness(levy, o.n);
    std::string note = r.beta_at_least ? "lower bound (scan cap)" : (r.beta_empty_set ? "sup of empty set" : "");
    summary.add({"beta", *r.beta, note});
    for (const auto& v : r.verdicts) verdicts.add({v.order, v.finite});
    for (const auto& n : r.notes) report.warn(n);
  }
}

void cmd_laplace(const PiiCharacteristics& pii, const Options& o, RunReport& report) {
  const LevyModel& levy = require_levy(pii);
  auto& table = report.table("laplace", {"beta", "value", "error_bound", "terms", "converged"});
  for (double b : o.beta) {
    const LaplaceSeriesResult r = laplace_transform_series(levy, b, o.max_terms, o.tol);
    table.add({b, r.value, r.error_bound, r.terms, r.converged});
    if (!r.converged) report.warn("SERIES_NOT_CONVERGED");
  }
}

void cmd_laplace_carson(const PiiCharacteristics& pii, const Options& o, RunReport& report) {
  const LevyModel& levy = require_levy(pii);
  if (o.n < 1) throw std::invalid_argument("--n must be >= 1");
  auto& table = report.table("laplace_carson", {"q", "order", "value"});
  for (double q : o.q)
    for (int k = 1; k <= o.n; ++k) table.add({q, k, laplace_carson(levy, q, k)});
}

void cmd_neg_ratio(const PiiCharacteristics& pii, const Options& o, RunReport& report) {
  const LevyModel& levy = require_levy(pii);
  if (o.n < 2) throw std::invalid_argument("--n must be >= 2");
  auto& table = report.table("negative_ratio", {"order", "ratio_to_minus_one"});
  for (int k = 2; k <= o.n; ++k) table.add({-k, negative_moment_ratio(levy, k)});
  report.warn("ASSUME_NEG1_FINITE");
}

void add_estimate(cli::Table& table, const std::string& label, double t, double order, const McEstimate& e) {
  table.add({label, t, order, e.mean, e.std_error, e.n_paths, e.flagged_paths});
}

std::vector<std::string> estimate_columns() {
  return {"estimator", "t", "order", "mean", "std_error", "n_paths", "flagged_paths"};
}

void dump_paths(const Options& o, const std::vector<double>& samples) {
  if (o.dump.empty()) return;
  std::ofstream out(o.dump);
  if (!out) throw std::invalid_argument("cannot write --dump file '" + o.dump + "'");
  write_path_csv(out, samples);
}

void cmd_mc_moment(const PiiCharacteristics& pii, const Options& o, RunReport& report) {
  auto& table = report.table("mc", estimate_columns());
  for (double t : o.t) {
    SimulationConfig c = mc_config(o);
    c.horizon = t;
    const std::vector<double> samples = functional_samples(pii, c);
    dump_paths(o, samples);
    const McEstimate e =
        summarize(samples, [](double x, double a) { return a == 0.0 ? 1.0 : std::pow(x, a); }, o.alpha, c);
    add_estimate(table, "direct", t, o.alpha, e);
    if (e.flagged_paths > 0) report.warn("MC_FLAGGED_PATHS");
  }
}

void cmd_mc_inf(const PiiCharacteristics& pii, const Options& o, RunReport& report) {
  const LevyModel& levy = require_levy(pii);
  SimulationConfig c = mc_config(o);
  c.horizon = o.horizon_inf;
  const McEstimate e = estimate_infinite(levy, o.alpha, o.mc_beta, c, o.override_phi1);
  auto& table = report.table("mc_infinite", {"statistic", "parameter", "T", "mean", "std_error", "n_paths",
                                             "flagged_paths", "tail_bound", "note"});
  table.add({o.mc_beta ? "laplace" : "moment", o.mc_beta ? *o.mc_beta : o.alpha, o.horizon_inf, e.mean, e.std_error,
             e.n_paths, e.flagged_paths, e.tail_bound ? json(*e.tail_bound) : json(nullptr), e.tail_bound_note});
  if (!e.tail_bound) report.warn("NO_TAIL_BOUND");
  if (e.flagged_paths > 0) report.warn("MC_FLAGGED_PATHS");
}

void cmd_mc_reversed(const PiiCharacteristics& pii, const Options& o, RunReport& report) {
  auto& table = report.table("mc", estimate_columns());
  for (double t : o.t) add_estimate(table, "reversed", t, o.alpha, estimate_reversed(pii, t, o.alpha, mc_config(o)));
}

bool within_sigma(double a, double sa, double b, double sb, double k = 3.0) {
  return std::abs(a - b) <= k * std::sqrt(sa * sa + sb * sb);
}

void cmd_mc_validate(const PiiCharacteristics& pii, const Options& o, RunReport& report) {
  auto& table = report.table("mc", estimate_columns());
  auto& verdict = report.table("verdict", {"t", "order", "difference", "combined_se", "result"});
  for (double t : o.t) {
    const McEstimate d = estimate_functional_moment(pii, t, o.alpha, mc_config(o));
    const McEstimate r = estimate_reversed(pii, t, o.alpha, mc_config(o));
    add_estimate(table, "direct", t, o.alpha, d);
    add_estimate(table, "reversed", t, o.alpha, r);
    const double se = std::hypot(d.std_error, r.std_error);
    verdict.add({t, o.alpha, d.mean - r.mean, se,
                 within_sigma(d.mean, d.std_error, r.mean, r.std_error) ? "PASS" : "FAIL"});
  }
}

// Cross-check suite: every analytic route available for the spec against
// an independent one.
void cmd_validate(const PiiCharacteristics& pii, const Options& o, RunReport& report) {
  auto& table = report.table("checks", {"check", "value", "reference", "tolerance", "result"});
  auto rel_check = [&](const std::string& name, double v, double ref, double tol) {
    const bool ok = std::abs(v - ref) <= tol * std::abs(ref);
    table.add({name, v, ref, tol, ok ? "PASS" : "FAIL"});
  };
  auto se_check = [&](const std::string& name, const McEstimate& e, double ref, double slack) {
    const bool ok = std::abs(e.mean - ref) <= 3.0 * e.std_error + slack;
    table.add({name, e.mean, ref, 3.0 * e.std_error + slack, ok ? "PASS" : "FAIL"});
  };
  const int n = std::min(o.n, 3);
  const double t = o.t.front();
  SimulationConfig mc = mc_config(o);
  mc.n_paths = std::min<long>(o.paths, 20000);

  auto phi_total = [&](double a) { return phi_t(pii, t, a); };
  const Extended p1 = phi_total(1.0);
  if (p1.is_finite()) {
    const double integral = integrate_or_throw([&](double s) { return h_alpha(pii, s, 1.0).value(); }, 0.0, t);
    rel_check("phi_t = int h_alpha (a=1)", p1.value(), integral, 1e-7);
  }

  if (pii.is_homogeneous()) {
    const LevyModel& levy = pii.levy();
    const MomentLadder ode = levy_moment_ode(levy, t, n);
    for (const auto& e : ode.entries) {
      if (!e.available) continue;
      rel_check("closed form vs ODE, order " + std::to_string(e.order),
                levy_moment_divided_difference(levy, t, e.order), e.value, 1e-7);
    }
    if (!ode.entries.empty() && ode.entries.front().available) {
      const int nq = std::min(2, static_cast<int>(ode.entries.size()));
      if (check_moment_ladder_condition(pii, t, nq) != Verdict::Violated) {
        const MomentLadder quad = pii_moment_quadrature(pii, t, nq);
        rel_check("quadrature vs ODE, order " + std::to_string(nq), quad.value(nq), ode.value(nq), 1e-5);
      }
      const McEstimate e = estimate_functional_moment(pii, t, 1.0, mc);
      se_check("MC E(I_t) vs ODE", e, ode.value(1), 0.0);
    }
    const Extended phi1 = levy.exponent(1.0);
    if (phi1.greater_than(0.0)) {
      SimulationConfig inf = mc;
      inf.horizon = std::max(1.0, std::log(1e4 / phi1.value()) / phi1.value());
      const McEstimate e = estimate_infinite(levy, 1.0, std::nullopt, inf);
      se_check("MC E(I_inf) vs n!/prod Phi", e, infinite_moment(levy, 1).value(), *e.tail_bound);
      try {
        const double a = laplace_carson(levy, 1.0, 2), b = laplace_carson(levy, 1.0, 1);
        rel_check("Laplace-Carson recurrence q=1", a * (1.0 + levy.exponent(2.0).value()), 2.0 * b, 1e-12);
      } catch (const PreconditionError&) {
        report.warn("LC_POLE");
      }
    }
  } else {
    if (check_moment_ladder_condition(pii, t, n) != Verdict::Violated) {
      const MomentLadder quad = pii_moment_quadrature(pii, t, std::min(n, 2));
      const McEstimate e = estimate_functional_moment(pii, t, 1.0, mc);
      se_check("MC E(I_t) vs quadrature", e, quad.value(1), 0.0);
    }
    const ReversedCharacteristics once = reverse_characteristics(pii, t);
    const ReversedCharacteristics twice = reverse_characteristics(once.as_pii(), t);
    const ItoCharacteristics c = pii.canonical();
    double worst = 0.0;
    for (int i = 1; i < 16; ++i) {
      const double u = t * i / 16.0;
      worst = std::max({worst, std::abs(twice.characteristics.drift(u) - c.drift(u)),
                        std::abs(twice.characteristics.jump_rate(u) - c.jump_rate(u)),
                        std::abs(twice.characteristics.jump_scale(u) - c.jump_scale(u))});
    }
    table.add({"double reversal max deviation", worst, 0.0, 1e-12, worst <= 1e-12 ? "PASS" : "FAIL"});
  }
  const McEstimate d = estimate_functional_moment(pii, t, 1.0, mc);
  const McEstimate r = estimate_reversed(pii, t, 1.0, mc);
  table.add({"direct vs reversed MC", d.mean, r.mean, 3.0 * std::hypot(d.std_error, r.std_error),
             within_sigma(d.mean, d.std_error, r.mean, r.std_error) ? "PASS" : "FAIL"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moments, transforms and finiteness of exponential functionals of Levy and PII processes"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  const char* env_format = std::getenv("EXPFUNC_FORMAT");
  o.format = env_format ? env_format : "table";
  app.add_option("--spec", o.spec_path, "Process specification (JSON)");
  app.add_option("--format", o.format, "Output format: table, csv or json (default $EXPFUNC_FORMAT or table)");
  app.add_option("--seed", o.seed, "Monte Carlo seed");

  auto add_t = [&](CLI::App* c) { c->add_option("--t", o.t, "Horizon(s)")->delimiter(',')->capture_default_str(); };
  auto add_n = [&](CLI::App* c, const char* what) { c->add_option("--n", o.n, what)->capture_default_str(); };
  auto add_mc = [&](CLI::App* c) {
    c->add_option("--paths", o.paths, "Number of paths")->capture_default_str();
    c->add_option("--dt", o.dt, "Time step of the grid scheme")->capture_default_str();
    c->add_option("--eps", o.eps, "Small-jump cutoff")->capture_default_str();
    c->add_flag("--gauss-comp", o.gauss_comp, "Gaussian compensation of the dropped small jumps");
    c->add_option("--scheme", o.scheme, "auto, grid or exact")->capture_default_str();
    c->add_flag("--serial", o.serial, "Use the serial reference kernels");
  };

  auto* moments = app.add_subcommand("moments", "E(I_t^k), k = 1..n");
  add_t(moments);
  add_n(moments, "Highest order");
  moments->add_option("--method", o.method, "auto, closed, ode or quadrature")->capture_default_str();
  moments->add_flag("--serial", o.serial, "Serial quadrature kernel");

  auto* inf = app.add_subcommand("inf-moments", "E(I_inf^k), k = 1..n");
  add_n(inf, "Highest order");

  auto* fin = app.add_subcommand("finiteness", "alpha0, beta and per-order finiteness of I_inf moments");
  add_n(fin, "Highest order scanned");
  fin->add_option("--sign", o.sign, "positive, negative or both")->capture_default_str();

  auto* lap = app.add_subcommand("laplace", "E exp(-beta I_inf) by its moment series");
  lap->add_option("--beta", o.beta, "beta value(s)")->delimiter(',')->capture_default_str();
  lap->add_option("--tol", o.tol, "Series tolerance")->capture_default_str();
  lap->add_option("--max-terms", o.max_terms, "Series term cap")->capture_default_str();

  auto* lc = app.add_subcommand("laplace-carson", "Laplace-Carson transforms of the moment ladder");
  lc->add_option("--q", o.q, "q value(s)")->delimiter(',')->capture_default_str();
  add_n(lc, "Highest order");

  auto* neg = app.add_subcommand("neg-ratio", "E(I_inf^-k) / E(I_inf^-1), k = 2..n");
  add_n(neg, "Deepest order");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimators");
  mc->require_subcommand(1);
  auto* mc_moment = mc->add_subcommand("moment", "E(I_t^alpha) from direct paths");
  add_t(mc_moment);
  mc_moment->add_option("--alpha", o.alpha, "Real moment order")->capture_default_str();
  mc_moment->add_option("--dump", o.dump, "Write per-path I_t to this CSV file");
  add_mc(mc_moment);
  auto* mc_inf = mc->add_subcommand("inf", "E(I_T^alpha) or E exp(-beta I_T) at a truncation horizon");
  mc_inf->add_option("--alpha", o.alpha, "Real moment order")->capture_default_str();
  mc_inf->add_option("--beta", o.mc_beta, "Laplace argument (replaces --alpha)");
  mc_inf->add_option("--T", o.horizon_inf, "Truncation horizon")->capture_default_str();
  mc_inf->add_flag("--override", o.override_phi1, "Run even when Phi(1) <= 0");
  add_mc(mc_inf);
  auto* mc_rev = mc->add_subcommand("reversed", "E(I_t^alpha) from time-reversed paths");
  add_t(mc_rev);
  mc_rev->add_option("--alpha", o.alpha, "Real moment order")->capture_default_str();
  add_mc(mc_rev);
  auto* mc_val = mc->add_subcommand("validate", "Direct vs reversed estimators at 3 combined SE");
  add_t(mc_val);
  mc_val->add_option("--alpha", o.alpha, "Real moment order")->capture_default_str();
  add_mc(mc_val);

  auto* val = app.add_subcommand("validate", "Cross-check every available route on the spec");
  add_t(val);
  add_n(val, "Highest order");
  add_mc(val);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitSpec;
  }

  RunReport report;
  const auto start = std::chrono::steady_clock::now();
  try {
    const cli::Format format = cli::parse_format(o.format);
    if (o.spec_path.empty()) throw SpecError("--spec is required");
    const PiiCharacteristics pii = load_process_spec(o.spec_path);
    report.spec = process_to_json(pii);
    std::string command;
    for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);
    report.command = command;

    if (*moments)
      cmd_moments(pii, o, report);
    else if (*inf)
      cmd_inf_moments(pii, o, report);
    else if (*fin)
      cmd_finiteness(pii, o, report);
    else if (*lap)
      cmd_laplace(pii, o, report);
    else if (*lc)
      cmd_laplace_carson(pii, o, report);
    else if (*neg)
      cmd_neg_ratio(pii, o, report);
    else if (*mc_moment)
      cmd_mc_moment(pii, o, report);
    else if (*mc_inf)
      cmd_mc_inf(pii, o, report);
    else if (*mc_rev)
      cmd_mc_reversed(pii, o, report);
    else if (*mc_val)
      cmd_mc_validate(pii, o, report);
    else if (*val)
      cmd_validate(pii, o, report);

    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.write(std::cout, format);
    return 0;
  } catch (const PreconditionError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    std::cout << "error," << e.code() << "\n";
    return kExitPrecondition;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const IntegrationError& e) {
    std::cerr << "integration error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}
