#include <doctest.h>

#include "bvc/densities.hpp"
#include "bvc/errors.hpp"
#include "bvc/json_io.hpp"
#include "bvc/marginal_complex.hpp"
#include "bvc/sim.hpp"

#include <string>

using bvc::Json;
using bvc::Rational;

namespace {

Rational q(long num, long den) { return Rational(bvc::BigInt(num), bvc::BigInt(den)); }

}  // namespace

TEST_CASE("fnv1a64 reference values") {
  CHECK(bvc::fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(bvc::fnv1a64_hex("a") == "af63dc4c8601ec8c");
  CHECK(bvc::fnv1a64_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("pair density serialization") {
  const auto d = bvc::make_pair_density(q(3, 8), q(1, 8), q(1, 8), q(3, 8));
  const Json j = bvc::to_json(d);
  CHECK(j["pp"] == "3/8");
  CHECK(j["mm"] == "3/8");
  CHECK(bvc::pair_density_from_json(j) == d);

  CHECK_THROWS_AS(bvc::pair_density_from_json(Json::parse(
                      R"({"pp":"1/4","pm":"1/4","mp":"1/4"})")),
                  bvc::ParseError);
  CHECK_THROWS_AS(bvc::pair_density_from_json(Json::parse(
                      R"({"pp":"1/4","pm":"1/4","mp":"1/4","mm":"1/4","x":"0"})")),
                  bvc::ParseError);
  // Rationals travel as strings; raw numbers are rejected.
  CHECK_THROWS_AS(bvc::pair_density_from_json(Json::parse(
                      R"({"pp":0.25,"pm":"1/4","mp":"1/4","mm":"1/4"})")),
                  bvc::ParseError);
  CHECK_THROWS_AS(bvc::pair_density_from_json(Json::parse(
                      R"({"pp":"0.25","pm":"1/4","mp":"1/4","mm":"1/4"})")),
                  bvc::ParseError);
  CHECK_THROWS_AS(bvc::pair_density_from_json(Json::parse("[]")),
                  bvc::ParseError);
}

TEST_CASE("joint density serialization omits zero cells") {
  bvc::JointDensity3 p;
  p.p[bvc::JointDensity3::index(1, 1, 1)] = q(1, 2);
  p.p[bvc::JointDensity3::index(-1, -1, -1)] = q(1, 2);
  const Json j = bvc::to_json(p);
  CHECK(j.size() == 2);
  CHECK(j["1,1,1"] == "1/2");
  CHECK(j["-1,-1,-1"] == "1/2");
}

TEST_CASE("complex serialization round trips") {
  const std::string text = R"({
    "variables": [
      {"name": "A", "alphabet": [1, -1]},
      {"name": "B", "alphabet": [1, -1]}
    ],
    "constraints": [
      {"over": ["A", "B"],
       "table": {"1,1": "3/8", "1,-1": "1/8", "-1,1": "1/8", "-1,-1": "3/8"}}
    ]
  })";
  const auto c = bvc::complex_from_json(Json::parse(text));
  REQUIRE(c.variables.size() == 2);
  CHECK(c.variables[0].name == "A");
  CHECK(c.variables[0].alphabet == std::vector<bvc::Outcome>{1, -1});
  REQUIRE(c.constraints.size() == 1);
  CHECK(c.constraints[0].table.at({1, -1}) == q(1, 8));

  // to_json -> from_json is the identity on the parsed structure.
  const auto back = bvc::complex_from_json(bvc::to_json(c));
  CHECK(back.variables[0].name == c.variables[0].name);
  CHECK(back.constraints[0].table == c.constraints[0].table);
  CHECK(back.constraints[0].over == c.constraints[0].over);

  CHECK_THROWS_AS(bvc::complex_from_json(Json::parse(R"({"variables": []})")),
                  bvc::ParseError);
  // Bad outcome tuples in table keys.
  CHECK_THROWS_AS(bvc::complex_from_json(Json::parse(R"({
    "variables": [{"name": "A", "alphabet": [1, -1]}],
    "constraints": [{"over": ["A"], "table": {"x": "1"}}]
  })")),
                  bvc::ParseError);
  // Type confusion inside nested fields maps to ParseError, not a foreign
  // exception type.
  CHECK_THROWS_AS(bvc::complex_from_json(Json::parse(R"({
    "variables": [{"name": 3, "alphabet": [1]}],
    "constraints": []
  })")),
                  bvc::ParseError);
}

TEST_CASE("plan serialization") {
  const std::string text = R"({
    "settings": [
      {"name": "a", "direction": [0.0, 0.0, 1.0]},
      {"name": "b"},
      {"name": "c"}
    ],
    "categories": [["a", "b"], ["a", "c"], ["b", "c"]],
    "trials_per_category": 1000,
    "seed": 42
  })";
  const auto plan = bvc::plan_from_json(Json::parse(text));
  CHECK(plan.settings.size() == 3);
  REQUIRE(plan.settings[0].direction.has_value());
  CHECK((*plan.settings[0].direction)[2] == 1.0);
  CHECK_FALSE(plan.settings[1].direction.has_value());
  CHECK(plan.categories.size() == 3);
  CHECK(plan.trials_per_category == 1000);
  CHECK(plan.seed == 42);

  const auto back = bvc::plan_from_json(bvc::to_json(plan));
  CHECK(bvc::to_json(back) == bvc::to_json(plan));

  // The seed is part of the contract: a plan without one is not a plan.
  Json no_seed = Json::parse(text);
  no_seed.erase("seed");
  CHECK_THROWS_AS(bvc::plan_from_json(no_seed), bvc::ParseError);
  Json bad_seed = Json::parse(text);
  bad_seed["seed"] = -1;
  CHECK_THROWS_AS(bvc::plan_from_json(bad_seed), bvc::ParseError);
  Json bad_category = Json::parse(text);
  bad_category["categories"] = Json::parse(R"([["a"]])");
  CHECK_THROWS_AS(bvc::plan_from_json(bad_category), bvc::ParseError);
}

TEST_CASE("model serialization round trips for all three kinds") {
  SUBCASE("finite source") {
    bvc::FiniteSourceModel m;
    m.lambda_weights = {q(5, 12), q(1, 12), q(1, 4), q(1, 4)};
    m.responses_station1 = {
        {"a", {1, 1, -1, -1}}, {"b", {1, -1, 1, -1}}, {"c", {-1, 1, 1, -1}}};
    m.responses_station2 = m.responses_station1;
    const bvc::HiddenVariableModel model = m;
    const auto parsed = bvc::model_from_json(bvc::canonical_model_json(model));
    CHECK(bvc::canonical_model_json(parsed) == bvc::canonical_model_json(model));
    CHECK(bvc::model_hash(parsed) == bvc::model_hash(model));
  }
  SUBCASE("continuous source") {
    bvc::ContinuousSourceModel m;
    m.thresholds_station1 = {{"a", 0.0}, {"b", 1.25}};
    m.thresholds_station2 = m.thresholds_station1;
    const bvc::HiddenVariableModel model = m;
    const auto parsed = bvc::model_from_json(bvc::canonical_model_json(model));
    CHECK(bvc::canonical_model_json(parsed) == bvc::canonical_model_json(model));
  }
  SUBCASE("time slot") {
    bvc::TimeSlotModel m;
    m.category_densities = {
        bvc::make_pair_density(q(1, 4), q(1, 4), q(1, 4), q(1, 4))};
    m.slots = {{{0.0, 2.0}}};
    m.min_slot_length = 2.0;
    const bvc::HiddenVariableModel model = m;
    const auto parsed = bvc::model_from_json(bvc::canonical_model_json(model));
    CHECK(bvc::canonical_model_json(parsed) == bvc::canonical_model_json(model));
  }
  SUBCASE("unknown kind") {
    CHECK_THROWS_AS(bvc::model_from_json(Json::parse(R"({"kind": "x"})")),
                    bvc::ParseError);
  }
}

TEST_CASE("model hashes separate distinct models") {
  bvc::FiniteSourceModel m;
  m.lambda_weights = {Rational(1)};
  m.responses_station1 = {{"a", {1}}};
  m.responses_station2 = {{"a", {1}}};
  const std::string h1 = bvc::model_hash(m);
  CHECK(h1.size() == 16);
  m.responses_station2 = {{"a", {-1}}};
  const std::string h2 = bvc::model_hash(m);
  CHECK(h1 != h2);

  // Insertion order of the maps never reaches the canonical form.
  bvc::FiniteSourceModel reordered;
  reordered.lambda_weights = {Rational(1)};
  reordered.responses_station1["z"] = {1};
  reordered.responses_station1["a"] = {1};
  bvc::FiniteSourceModel direct;
  direct.lambda_weights = {Rational(1)};
  direct.responses_station1["a"] = {1};
  direct.responses_station1["z"] = {1};
  CHECK(bvc::model_hash(reordered) == bvc::model_hash(direct));
}

TEST_CASE("record serialization is byte-stable") {
  bvc::EmpiricalRecord r;
  r.model_kind = "time_slot";
  r.model_hash = "00ff00ff00ff00ff";
  r.seed = 7;
  r.trials_per_category = 12;
  r.categories = {{"a", "b", 3, 4, 5, 0, bvc::TimeSlot{0.0, 1.0}},
                  {"a", "c", 2, 2, 4, 4, bvc::TimeSlot{1.0, 2.0}}};
  const Json j = bvc::to_json(r);
  const auto back = bvc::record_from_json(j);
  CHECK(bvc::to_json(back).dump() == j.dump());
  CHECK(back.categories[0].slot == r.categories[0].slot);
  CHECK(back.categories[1].n_mm == 4);

  Json broken = j;
  broken.erase("model_hash");
  CHECK_THROWS_AS(bvc::record_from_json(broken), bvc::ParseError);
}

TEST_CASE("inequality reports serialize as ordered id/slack pairs") {
  const auto report =
      bvc::tetrahedron_check({q(1, 2), q(1, 2), q(-1, 2)});
  const Json j = bvc::to_json(report);
  REQUIRE(j.size() == 4);
  CHECK(j[0]["id"] == "T1");
  CHECK(j[0]["slack"] == "3/2");
  CHECK(j[3]["id"] == "T4");
  CHECK(j[3]["slack"] == "-1/2");
}

TEST_CASE("solution serialization omits zero entries") {
  bvc::ComplexSolution sol;
  sol.atom_ids = {"1,1", "1,-1", "-1,1", "-1,-1"};
  sol.row_ids = {"A,B:1,1", "mass"};
  sol.witness = {q(1, 2), Rational(0), Rational(0), q(1, 2)};
  const Json j = bvc::to_json(sol);
  CHECK(j["feasible"] == true);
  CHECK(j["witness"].size() == 2);
  CHECK(j["witness"]["1,1"] == "1/2");
  CHECK_FALSE(j.contains("certificate"));
}

TEST_CASE("malformed json text reports position") {
  CHECK_THROWS_AS(bvc::parse_json_text("{", "input"), bvc::ParseError);
  CHECK_NOTHROW(bvc::parse_json_text("{}", "input"));
}
