#include <doctest.h>

#include "expfunc/spec_io.hpp"
#include "oracles.hpp"

using namespace expfunc;
using nlohmann::json;

TEST_CASE("corpus round-trips through the canonical echo") {
  const auto files = oracle::corpus();
  CHECK(files.size() >= 11);
  for (const auto& file : files) {
    CAPTURE(file);
    const PiiCharacteristics pii = load_process_spec(file);
    const json echo = process_to_json(pii);
    const PiiCharacteristics again = parse_process_spec(echo);
    CHECK(again == pii);
    CHECK(process_to_json(again) == echo);
  }
}

TEST_CASE("drift conventions and the untruncated echo") {
  const json doc = json::parse(R"js({"process": {"kind": "homogeneous", "levy": {
      "drift_convention": "truncated", "b0": 0.5, "c0": 0.0,
      "jumps": {"kind": "point_masses", "atoms": [{"x": 2.0, "rate": 1.5}, {"x": 0.5, "rate": 1.0}]}}}})js");
  const PiiCharacteristics pii = parse_process_spec(doc);
  const json echo = process_to_json(pii);
  CHECK(echo["process"]["levy"]["drift_convention"] == "untruncated");
  // Only the atom outside [-1, 1] moves the drift.
  CHECK(echo["process"]["levy"]["b0"].get<double>() == doctest::Approx(0.5 + 3.0));
}

TEST_CASE("general density with infinite bounds") {
  const json doc = json::parse(R"js({"process": {"kind": "homogeneous", "levy": {"drift_convention": "finite_variation", "b0": 0.0, "c0": 0.0,
      "jumps": {"kind": "general_density", "density": "exp(-x)", "lower": 0, "upper": "inf",
                "integrability_verified": true, "envelope": 1.0}}}})js");
  const PiiCharacteristics pii = parse_process_spec(doc);
  // Unit-rate exponential jumps: Phi(a) = a - int (e^{-ax} - 1 + ax) e^{-x} dx = a / (1 + a).
  CHECK(pii.levy().exponent(1.0).value() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(parse_process_spec(process_to_json(pii)) == pii);
}

TEST_CASE("schema errors name the offending key") {
  auto message = [](const char* text) -> std::string {
    try {
      parse_process_spec(json::parse(text));
    } catch (const SpecError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message(R"js({"process": {"kind": "homogeneous", "levy": {"b0": 1, "c0": 1, "jumps": {"kind": "none"}, "bo": 2}}})js")
            .find("bo") != std::string::npos);
  CHECK(message(R"js({"process": {"kind": "levy"}})js").find("kind") != std::string::npos);
  CHECK(message(R"js({"proces": {}})js") != "");
  CHECK(message(R"js({"process": {"kind": "homogeneous", "levy": {"b0": 1, "c0": -1}}})js") != "");
  CHECK(message(R"js({"process": {"kind": "nonhom_poisson", "intensity": "t - 1"}})js") != "");
  CHECK(message(R"js({"process": {"kind": "nonhom_poisson", "intensity": "sin(t)"}})js") != "");
  CHECK(message(R"js({"process": {"kind": "homogeneous", "levy": {"jumps": {"kind": "tempered_stable", "c": 1, "M": 1, "beta": 1.5}}}})js") != "");
  CHECK(message(R"js({"process": {"kind": "homogeneous", "levy": {"jumps": {"kind": "general_density", "density": "exp(-x)", "lower": 0, "upper": 1}}}})js") != "");
  CHECK_THROWS_AS(load_process_spec("/nonexistent/spec.json"), SpecError);
}
