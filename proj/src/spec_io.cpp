#include "expfunc/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>

namespace expfunc {
namespace {

using nlohmann::json;

void require_object(const json& j, const char* where) {
  if (!j.is_object()) throw SpecError(std::string(where) + " must be an object");
}

void allow_keys(const json& j, const char* where, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) throw SpecError(std::string(where) + ": unknown key '" + item.key() + "'");
}

double number(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw SpecError(std::string(where) + ": missing '" + key + "'");
  const json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw SpecError(std::string(where) + ": '" + key + "' must be a number");
}

double number_or(const json& j, const char* key, const char* where, double fallback) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

json encode_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Expression expression(const json& j, const char* key, const char* where, const char* variable = "t") {
  if (!j.contains(key)) throw SpecError(std::string(where) + ": missing '" + key + "'");
  const json& v = j.at(key);
  if (v.is_number()) return Expression::constant(v.get<double>(), variable);
  if (!v.is_string()) throw SpecError(std::string(where) + ": '" + key + "' must be an expression string");
  return Expression::parse(v.get<std::string>(), variable);
}

Expression expression_or(const json& j, const char* key, const char* where, double fallback) {
  return j.contains(key) ? expression(j, key, where) : Expression::constant(fallback);
}

std::optional<double> horizon_hint(const json& j) {
  if (!j.contains("horizon_hint")) return std::nullopt;
  return number(j, "horizon_hint", "process");
}

DriftConvention convention(const json& j) {
  if (!j.contains("drift_convention")) return DriftConvention::Untruncated;
  const std::string c = j.at("drift_convention").get<std::string>();
  if (c == "untruncated") return DriftConvention::Untruncated;
  if (c == "truncated") return DriftConvention::Truncated;
  if (c == "finite_variation") return DriftConvention::FiniteVariation;
  throw SpecError("levy: drift_convention must be untruncated, truncated or finite_variation");
}

}  // namespace

JumpMeasure parse_jumps(const json& j) {
  if (j.is_null()) return JumpMeasure::none();
  require_object(j, "jumps");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw SpecError("jumps: missing 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") {
    allow_keys(j, "jumps", {"kind"});
    return JumpMeasure::none();
  }
  if (kind == "point_masses") {
    allow_keys(j, "jumps", {"kind", "atoms"});
    if (!j.contains("atoms") || !j.at("atoms").is_array()) throw SpecError("point_masses: 'atoms' must be a list");
    std::vector<PointMass> atoms;
    for (const json& a : j.at("atoms")) {
      require_object(a, "atom");
      allow_keys(a, "atom", {"x", "rate"});
      atoms.push_back({number(a, "x", "atom"), number(a, "rate", "atom")});
    }
    return JumpMeasure::point_masses(std::move(atoms));
  }
  if (kind == "gaussian_jumps") {
    allow_keys(j, "jumps", {"kind", "lambda", "mean", "std"});
    return JumpMeasure::gaussian(number(j, "lambda", "gaussian_jumps"), number(j, "mean", "gaussian_jumps"),
                                 number(j, "std", "gaussian_jumps"));
  }
  if (kind == "tempered_stable") {
    allow_keys(j, "jumps", {"kind", "c", "M", "beta"});
    return JumpMeasure::tempered_stable(number(j, "c", "tempered_stable"), number(j, "M", "tempered_stable"),
                                        number(j, "beta", "tempered_stable"));
  }
  if (kind == "general_density") {
    allow_keys(j, "jumps", {"kind", "density", "lower", "upper", "integrability_verified", "envelope"});
    GeneralDensity g{expression(j, "density", "general_density", "x"), number(j, "lower", "general_density"),
                     number(j, "upper", "general_density"), j.value("integrability_verified", false), std::nullopt};
    if (j.contains("envelope")) g.envelope = number(j, "envelope", "general_density");
    return JumpMeasure::general(std::move(g));
  }
  throw SpecError("jumps: unknown kind '" + kind + "'");
}

LevyModel parse_levy(const json& j) {
  require_object(j, "levy");
  const std::string kind = j.value("kind", std::string("triplet"));
  if (kind == "subordinated_brownian") {
    allow_keys(j, "levy", {"kind", "mu", "sigma", "b"});
    return SubordinatedBrownian{number(j, "mu", "levy"), number(j, "sigma", "levy"), number(j, "b", "levy")};
  }
  if (kind != "triplet") throw SpecError("levy: unknown kind '" + kind + "'");
  allow_keys(j, "levy", {"kind", "b0", "c0", "drift_convention", "jumps"});
  const JumpMeasure jumps = j.contains("jumps") ? parse_jumps(j.at("jumps")) : JumpMeasure::none();
  return LevyTriplet::from_convention(number_or(j, "b0", "levy", 0.0), number_or(j, "c0", "levy", 0.0), jumps,
                                      convention(j));
}

PiiCharacteristics parse_process_spec(const json& document) {
  require_object(document, "document");
  allow_keys(document, "document", {"process", "name", "description"});
  if (!document.contains("process")) throw SpecError("document: missing 'process'");
  const json& p = document.at("process");
  require_object(p, "process");
  if (!p.contains("kind") || !p.at("kind").is_string()) throw SpecError("process: missing 'kind'");
  const std::string kind = p.at("kind").get<std::string>();
  auto levy = [&]() {
    if (!p.contains("levy")) throw SpecError("process: missing 'levy'");
    return parse_levy(p.at("levy"));
  };
  if (kind == "homogeneous") {
    allow_keys(p, "process", {"kind", "levy"});
    return PiiCharacteristics::homogeneous(levy());
  }
  if (kind == "nonhom_poisson") {
    allow_keys(p, "process", {"kind", "intensity", "horizon_hint"});
    return PiiCharacteristics::nonhom_poisson(expression(p, "intensity", "process"), horizon_hint(p));
  }
  if (kind == "time_changed_levy") {
    allow_keys(p, "process", {"kind", "levy", "tau", "horizon_hint"});
    return PiiCharacteristics::time_changed(levy(), expression(p, "tau", "process"), horizon_hint(p));
  }
  if (kind == "integrated_levy") {
    allow_keys(p, "process", {"kind", "levy", "g", "horizon_hint"});
    return PiiCharacteristics::integrated(levy(), expression(p, "g", "process"), horizon_hint(p));
  }
  if (kind == "general_ito") {
    allow_keys(p, "process", {"kind", "levy", "drift", "variance", "jump_rate", "jump_scale", "horizon_hint"});
    ItoCharacteristics c;
    c.drift = expression_or(p, "drift", "process", 0.0);
    c.variance = expression_or(p, "variance", "process", 0.0);
    c.jump_rate = expression_or(p, "jump_rate", "process", 1.0);
    c.jump_scale = expression_or(p, "jump_scale", "process", 1.0);
    c.base = p.contains("levy") ? levy() : LevyModel(LevyTriplet{});
    return PiiCharacteristics::general(std::move(c), horizon_hint(p));
  }
  throw SpecError("process: unknown kind '" + kind + "'");
}

PiiCharacteristics load_process_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path + "'");
  json document;
  try {
    in >> document;
  } catch (const json::exception& e) {
    throw SpecError("spec file '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return parse_process_spec(document);
  } catch (const json::exception& e) {
    throw SpecError(std::string("spec type error: ") + e.what());
  }
}

json jumps_to_json(const JumpMeasure& jumps) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return {{"kind", "none"}};
        } else if constexpr (std::is_same_v<T, std::vector<PointMass>>) {
          json atoms = json::array();
          for (const auto& a : r) atoms.push_back({{"x", a.location}, {"rate", a.rate}});
          return {{"kind", "point_masses"}, {"atoms", atoms}};
        } else if constexpr (std::is_same_v<T, GaussianJumps>) {
          return {{"kind", "gaussian_jumps"}, {"lambda", r.rate}, {"mean", r.mean}, {"std", r.std}};
        } else if constexpr (std::is_same_v<T, TemperedStable>) {
          return {{"kind", "tempered_stable"}, {"c", r.c}, {"M", r.decay}, {"beta", r.index}};
        } else {
          json g = {{"kind", "general_density"},
                    {"density", r.density.to_string()},
                    {"lower", encode_number(r.lower)},
                    {"upper", encode_number(r.upper)},
                    {"integrability_verified", r.integrability_verified}};
          if (r.envelope) g["envelope"] = *r.envelope;
          return g;
        }
      },
      jumps.repr());
}

json levy_to_json(const LevyModel& levy) {
  if (const auto* t = levy.triplet())
    return {{"kind", "triplet"},
            {"b0", t->b0},
            {"c0", t->c0},
            {"drift_convention", "untruncated"},
            {"jumps", jumps_to_json(t->jumps)}};
  const auto& sb = std::get<SubordinatedBrownian>(levy.repr());
  return {{"kind", "subordinated_brownian"}, {"mu", sb.mu}, {"sigma", sb.sigma}, {"b", sb.b}};
}

json process_to_json(const PiiCharacteristics& pii) {
  json p = std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PiiCharacteristics::Homogeneous>) {
          return {{"kind", "homogeneous"}, {"levy", levy_to_json(v.levy)}};
        } else if constexpr (std::is_same_v<T, PiiCharacteristics::NonHomPoisson>) {
          return {{"kind", "nonhom_poisson"}, {"intensity", v.intensity.to_string()}};
        } else if constexpr (std::is_same_v<T, PiiCharacteristics::TimeChangedLevy>) {
          return {{"kind", "time_changed_levy"}, {"levy", levy_to_json(v.base)}, {"tau", v.tau.to_string()}};
        } else if constexpr (std::is_same_v<T, PiiCharacteristics::IntegratedLevy>) {
          return {{"kind", "integrated_levy"}, {"levy", levy_to_json(v.base)}, {"g", v.g.to_string()}};
        } else {
          const ItoCharacteristics& c = v.characteristics;
          return {{"kind", "general_ito"},
                  {"levy", levy_to_json(c.base)},
                  {"drift", c.drift.to_string()},
                  {"variance", c.variance.to_string()},
                  {"jump_rate", c.jump_rate.to_string()},
                  {"jump_scale", c.jump_scale.to_string()}};
        }
      },
      pii.variant());
  if (pii.horizon_hint()) p["horizon_hint"] = *pii.horizon_hint();
  return {{"process", p}};
}

}  // namespace expfunc
