#include <doctest.h>

#include "povcal/scenario.hpp"
#include "support/oracles.hpp"

using namespace povcal;
using nlohmann::json;

namespace {

json demo() {
  return json::parse(R"({
    "dim": 2,
    "observables": {
      "xi": {"labels": [1, 0], "atoms": [[[0, 0], [0, 1]], [[1, 0], [0, 0]]]},
      "c": {"atoms": [[[0.5, [0, -0.5]], [[0, 0.5], 0.5]], [[0.5, [0, 0.5]], [[0, -0.5], 0.5]]]}
    },
    "kernels": {"nu": [[0.8, 0.2], [0.3, 0.7]]},
    "states": {"rho": [[0.5, 0], [0, 0.5]], "P": [0.25, 0.75]}
  })");
}

std::string error_of(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("parses every object kind") {
  const Scenario sc = parse_scenario(demo());
  CHECK(sc.backend == Backend::hilbert);
  CHECK(sc.dim == 2);
  const Observable& xi = sc.observable("xi");
  CHECK(xi.labels() == std::vector<double>{0, 1});
  CHECK(oracle::sup(xi.atom(0).matrix() - oracle::diag({1, 0})) == 0.0);
  const Observable& c = sc.observable("c");
  CHECK(c.atom(0).matrix()(0, 1) == std::complex<double>(0, -0.5));
  CHECK(sc.kernel("nu")(1, 0) == 0.3);
  CHECK(sc.state("rho").faithful());
  CHECK(sc.distribution("P") == Eigen::Vector2d(0.25, 0.75));
  CHECK_THROWS_AS(sc.observable("nope"), Error);
}

TEST_CASE("round trips through json") {
  const Scenario sc = parse_scenario(demo());
  json doc = demo();
  doc["observables"]["copy"] = to_json(sc.observable("c"));
  const Scenario again = parse_scenario(doc);
  CHECK(atom_distance(again.observable("copy"), sc.observable("c")) == 0.0);
}

TEST_CASE("tribe backend") {
  const Scenario sc = parse_scenario(json::parse(R"({
    "dim": 3, "backend": "tribe",
    "observables": {"f": {"atoms": [[0.2, 1, 0.5], [0.8, 0, 0.5]]}},
    "states": {"P": [0.5, 0.25, 0.25], "two": [0.5, 0.5]}
  })"));
  CHECK(sc.observable("f").backend() == Backend::tribe);
  CHECK(sc.state("P").backend() == Backend::tribe);
  CHECK(sc.distribution("two").size() == 2);
  CHECK_THROWS_AS(sc.state("two"), Error);
}

TEST_CASE("tolerances") {
  json doc = demo();
  doc["tolerances"] = {{"eq", 1e-6}};
  const Scenario sc = parse_scenario(doc, 10.0);
  CHECK(sc.tolerance.eq == doctest::Approx(1e-5));
  CHECK(sc.tolerance.feas == doctest::Approx(1e-6));
  CHECK(sc.tolerance.psd == tolerances().psd);
  doc["tolerances"] = {{"bogus", 1}};
  CHECK(error_of(doc).find("tolerances.bogus") != std::string::npos);
}

TEST_CASE("diagnostics carry a location") {
  json doc = demo();
  doc["observables"]["xi"]["atoms"][1][0][0] = 0.9;
  const std::string bad_norm = error_of(doc);
  CHECK(bad_norm.find("observables.xi") != std::string::npos);
  CHECK(bad_norm.find("NotNormalized") != std::string::npos);

  doc = demo();
  doc["kernels"]["nu"][1] = {0.3};
  CHECK(error_of(doc).find("kernels.nu[1]") != std::string::npos);

  doc = demo();
  doc["observables"]["c"]["atoms"][0][0][1] = "x";
  CHECK(error_of(doc).find("observables.c.atoms[0][0][1]") != std::string::npos);

  doc = demo();
  doc["states"]["rho"] = json::parse("[[0.7, 0], [0, 0.7]]");
  CHECK(error_of(doc).find("states.rho") != std::string::npos);

  doc = demo();
  doc.erase("dim");
  CHECK(error_of(doc).find("dim") != std::string::npos);

  CHECK_THROWS_AS(load_scenario("/nonexistent/file.json"), Error);
}

}
