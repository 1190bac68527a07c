#include <doctest.h>

#include <algorithm>

#include "pmm/errors.hpp"
#include "pmm/instance.hpp"
#include "support/corpus.hpp"

using namespace pmm;
using namespace pmmtest;

namespace {

bool has_problem(const std::vector<std::string>& problems, const std::string& needle) {
  return std::any_of(problems.begin(), problems.end(), [&](const std::string& p) {
    return p.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_SUITE("instance") {

TEST_CASE("matrix instance parses with ids, demands, distances") {
  Instance inst = instance_from_json_text(two_by_two_text(1));
  REQUIRE(inst.nf() == 2);
  REQUIRE(inst.nc() == 2);
  CHECK(inst.facilities[0].id == "f1");
  CHECK(inst.facilities[1].open_cost == Rat(3));
  CHECK(inst.clients[0].radius == Rat(10));
  CHECK(inst.clients[1].demand == Rat(2));
  CHECK(inst.dfc(0, 0) == Rat(1));
  CHECK(inst.dfc(0, 1) == Rat(4));
  CHECK(inst.dff(0, 1) == Rat(5));
  CHECK(inst.dcc(0, 1) == Rat(5));
  CHECK(inst.facility_index("f2") == 1);
  CHECK(inst.facility_index("nope") == -1);
  CHECK(inst.client_index("c2") == 1);
  CHECK(validate_instance(inst).empty());
  CHECK(inst.uniform_radii());
}

TEST_CASE("demand defaults to one when absent") {
  std::string text = R"({
    "facilities": [{"id": "f1", "cost": 0}],
    "clients": [{"id": "c1", "radius": 5}],
    "metric": {"kind": "matrix", "rows": [["0", "2"], ["2", "0"]]},
    "matroid": {"type": "uniform", "k": 1}
  })";
  Instance inst = instance_from_json_text(text);
  CHECK(inst.clients[0].demand == Rat(1));
  CHECK(inst.facilities[0].open_cost == Rat(0));  // ints accepted, not only strings
}

TEST_CASE("l1 metric computes exact distances") {
  Instance inst = instance_from_json_text(l1_instance_text(
      {{"f1", "0"}, {"f2", "0"}}, {{"c1", "9"}}, {{0, 0}, {3, 4}}, {{1, 1}},
      uniform_matroid_json(2)));
  CHECK(inst.dfc(0, 0) == Rat(2));
  CHECK(inst.dfc(1, 0) == Rat(5));
  CHECK(inst.dff(0, 1) == Rat(7));
  CHECK(validate_instance(inst).empty());
}

TEST_CASE("rational fields accept integers and strings, not raw floats") {
  std::string text = R"({
    "facilities": [{"id": "f1", "cost": "1/2"}],
    "clients": [{"id": "c1", "radius": "2.5", "demand": "3"}],
    "metric": {"kind": "matrix", "rows": [[0, 1], [1, 0]]},
    "matroid": {"type": "uniform", "k": 1}
  })";
  Instance inst = instance_from_json_text(text);
  CHECK(inst.facilities[0].open_cost == rat_frac(1, 2));
  CHECK(inst.clients[0].radius == rat_frac(5, 2));
  CHECK(inst.clients[0].demand == Rat(3));
  // JSON float literals round through binary doubles, so they are rejected;
  // exact decimals must be quoted.
  std::string floaty = R"({
    "facilities": [{"id": "f1", "cost": 0}],
    "clients": [{"id": "c1", "radius": 2.5}],
    "metric": {"kind": "matrix", "rows": [[0, 1], [1, 0]]},
    "matroid": {"type": "uniform", "k": 1}
  })";
  CHECK_THROWS_AS(instance_from_json_text(floaty), ParseError);
}

TEST_CASE("parse failures throw ParseError") {
  CHECK_THROWS_AS(instance_from_json_text("not json"), ParseError);
  CHECK_THROWS_AS(instance_from_json_text("{}"), ParseError);
  // Matrix not square / wrong size.
  CHECK_THROWS_AS(instance_from_json_text(R"({
    "facilities": [{"id": "f1", "cost": 0}],
    "clients": [{"id": "c1", "radius": 1}],
    "metric": {"kind": "matrix", "rows": [["0", "1"]]},
    "matroid": {"type": "uniform", "k": 1}
  })"),
                  ParseError);
  // L1 point missing for an id.
  CHECK_THROWS_AS(instance_from_json_text(R"({
    "facilities": [{"id": "f1", "cost": 0}],
    "clients": [{"id": "c1", "radius": 1}],
    "metric": {"kind": "l1", "points": {"f1": [0, 0]}},
    "matroid": {"type": "uniform", "k": 1}
  })"),
                  ParseError);
  // Mixed point dimensions.
  CHECK_THROWS_AS(instance_from_json_text(R"({
    "facilities": [{"id": "f1", "cost": 0}],
    "clients": [{"id": "c1", "radius": 1}],
    "metric": {"kind": "l1", "points": {"f1": [0, 0], "c1": [1]}},
    "matroid": {"type": "uniform", "k": 1}
  })"),
                  ParseError);
  // Unknown metric kind.
  CHECK_THROWS_AS(instance_from_json_text(R"({
    "facilities": [{"id": "f1", "cost": 0}],
    "clients": [{"id": "c1", "radius": 1}],
    "metric": {"kind": "l2", "points": {"f1": [0], "c1": [1]}},
    "matroid": {"type": "uniform", "k": 1}
  })"),
                  ParseError);
  // Unknown matroid type.
  CHECK_THROWS_AS(instance_from_json_text(R"({
    "facilities": [{"id": "f1", "cost": 0}],
    "clients": [{"id": "c1", "radius": 1}],
    "metric": {"kind": "matrix", "rows": [["0", "1"], ["1", "0"]]},
    "matroid": {"type": "mystery"}
  })"),
                  ParseError);
  // Partition part referencing an unknown facility id.
  CHECK_THROWS_AS(instance_from_json_text(R"({
    "facilities": [{"id": "f1", "cost": 0}],
    "clients": [{"id": "c1", "radius": 1}],
    "metric": {"kind": "matrix", "rows": [["0", "1"], ["1", "0"]]},
    "matroid": {"type": "partition", "parts": [["zzz"]], "caps": [1]}
  })"),
                  ParseError);
}

TEST_CASE("validation reports structural problems") {
  // Duplicate id across facilities and clients.
  Instance dup = instance_from_json_text(R"({
    "facilities": [{"id": "a", "cost": 0}],
    "clients": [{"id": "a", "radius": 1}],
    "metric": {"kind": "matrix", "rows": [["0", "1"], ["1", "0"]]},
    "matroid": {"type": "uniform", "k": 1}
  })");
  CHECK(has_problem(validate_instance(dup), "duplicate id"));

  Instance neg = instance_from_json_text(R"({
    "facilities": [{"id": "f1", "cost": "-1"}],
    "clients": [{"id": "c1", "radius": "-2", "demand": "-3"}],
    "metric": {"kind": "matrix", "rows": [["0", "1"], ["1", "0"]]},
    "matroid": {"type": "uniform", "k": 1}
  })");
  auto problems = validate_instance(neg);
  CHECK(has_problem(problems, "negative cost"));
  CHECK(has_problem(problems, "negative radius"));
  CHECK(has_problem(problems, "negative demand"));

  Instance asym = instance_from_json_text(R"({
    "facilities": [{"id": "f1", "cost": 0}],
    "clients": [{"id": "c1", "radius": 1}],
    "metric": {"kind": "matrix", "rows": [["0", "1"], ["2", "0"]]},
    "matroid": {"type": "uniform", "k": 1}
  })");
  CHECK(has_problem(validate_instance(asym), "asymmetry"));

  CHECK_THROWS_AS(validate_instance_or_throw(asym), ValidationError);
}

TEST_CASE("triangle inequality is checked and skippable") {
  // d(f1,c2) = 10 but the path through c1 has length 2.
  Instance tri = instance_from_json_text(R"({
    "facilities": [{"id": "f1", "cost": 0}],
    "clients": [{"id": "c1", "radius": 1}, {"id": "c2", "radius": 1}],
    "metric": {"kind": "matrix",
               "rows": [["0", "1", "10"], ["1", "0", "1"], ["10", "1", "0"]]},
    "matroid": {"type": "uniform", "k": 1}
  })");
  CHECK(has_problem(validate_instance(tri), "triangle"));
  CHECK(validate_instance(tri, {.skip_triangle = true}).empty());
}

TEST_CASE("l1 tables skip the axiom sweep by construction") {
  Instance inst = instance_from_json_text(l1_instance_text(
      {{"f1", "0"}}, {{"c1", "3"}}, {{0, 0}}, {{1, 2}}, uniform_matroid_json(1)));
  CHECK(inst.table->kind() == MetricDataKind::L1Points);
  CHECK(inst.table->check_axioms(false).empty());
}

TEST_CASE("empty sides and ground mismatch are reported") {
  Instance no_clients = instance_from_json_text(R"({
    "facilities": [{"id": "f1", "cost": 0}],
    "clients": [],
    "metric": {"kind": "matrix", "rows": [["0"]]},
    "matroid": {"type": "uniform", "k": 1}
  })");
  CHECK(has_problem(validate_instance(no_clients), "no clients"));

  Instance bad_ground = instance_from_json_text(two_by_two_text(1));
  bad_ground.matroid.ground_size = 5;
  CHECK(has_problem(validate_instance(bad_ground), "ground size"));
}

TEST_CASE("facilities_by_distance sorts by distance then index") {
  // f2 and f3 tie at distance 2; the lower index must come first.
  Instance inst = instance_from_json_text(l1_instance_text(
      {{"f1", "0"}, {"f2", "0"}, {"f3", "0"}}, {{"c1", "9"}},
      {{5, 0}, {2, 0}, {0, 2}}, {{0, 0}}, uniform_matroid_json(3)));
  auto order = inst.facilities_by_distance(0);
  REQUIRE(order.size() == 3);
  CHECK(order[0] == 1);
  CHECK(order[1] == 2);
  CHECK(order[2] == 0);
}

TEST_CASE("uniform_radii detects a mismatch") {
  Instance inst = instance_from_json_text(matrix_instance_text(
      {{"f1", "0"}}, {{"c1", "1", "1"}, {"c2", "2", "1"}},
      {{"0", "1", "1"}, {"1", "0", "1"}, {"1", "1", "0"}}, uniform_matroid_json(1)));
  CHECK(!inst.uniform_radii());
}

TEST_CASE("generated instances parse back and validate cleanly") {
  for (int seed : {1, 2, 3, 4}) {
    GenOptions o = corpus_options(seed);
    Instance inst = gen_instance(o);
    CHECK(validate_instance(inst).empty());
    CHECK(inst.nf() == o.facilities);
    CHECK(inst.nc() == o.clients);
  }
}

}  // TEST_SUITE
