#include <doctest.h>

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "bisp/json_io.hpp"
#include "bisp/layered_sampler.hpp"

using namespace bisp;
using nlohmann::json;

TEST_CASE("system JSON round trips the plane system") {
  const ExplicitSystem sys = materialize(plan_layout(7));
  const json j = system_to_json(sys);
  CHECK(j.at("n") == 7);
  CHECK(j.at("sets").size() == 7);
  CHECK(j.at("w").size() == 7);
  const ExplicitSystem back = system_from_json(j);
  CHECK(back.family.n == sys.family.n);
  CHECK(back.family.sets == sys.family.sets);
  CHECK(back.w == sys.w);
  CHECK(back.s == sys.s);
}

TEST_CASE("system JSON round trips a blocked layout") {
  const ExplicitSystem sys = materialize(plan_layout(12));
  const ExplicitSystem back = system_from_json(system_to_json(sys));
  CHECK(back.family.sets == sys.family.sets);
  CHECK(back.s == sys.s);
}

TEST_CASE("incomplete system JSON is rejected") {
  CHECK_THROWS_AS(system_from_json(json::object()), ParseError);
  CHECK_THROWS_AS(system_from_json(json::array()), ParseError);
  json j = system_to_json(materialize(plan_layout(2)));
  j.erase("w");
  CHECK_THROWS_AS(system_from_json(j), ParseError);
}

TEST_CASE("malformed s entries are rejected") {
  json j = system_to_json(materialize(plan_layout(2)));
  json good = j;

  j = good;
  j["s"].push_back(json::array({0, 0, 0}));
  CHECK_THROWS_AS(system_from_json(j), ParseError);

  j = good;
  j["s"].push_back(json::array({0, 5, 0, 0.5}));  // set index out of range
  CHECK_THROWS_AS(system_from_json(j), ParseError);

  j = good;
  j["s"].push_back(json::array({0, 0, 9, 0.5}));  // element out of range
  CHECK_THROWS_AS(system_from_json(j), ParseError);

  j = good;
  j["s"].push_back(j["s"][0]);  // duplicate (i, j, p)
  CHECK_THROWS_AS(system_from_json(j), ParseError);
}

TEST_CASE("layout JSON carries the block schedule") {
  const json j = layout_to_json(plan_schedule(9));
  CHECK(j.at("n") == 9);
  CHECK(j.at("base").at("kind") == "plane");
  CHECK(j.at("base").at("q") == 2);
  CHECK(j.at("base").at("n0") == 7);
  CHECK(j.at("blocks") == json::array({2}));
  REQUIRE(j.at("accept_prob").size() == 1);
  CHECK(j.at("accept_prob")[0].get<double>() ==
        doctest::Approx(4.0 / 9).epsilon(1e-12));
  CHECK(j.at("cardinality") == 4);
}

TEST_CASE("cyclic layouts emit their interval length") {
  const json j = layout_to_json(plan_schedule(3));
  CHECK(j.at("base").at("kind") == "cyclic");
  CHECK(j.at("base").at("t") == 2);
  CHECK(j.at("base").at("n0") == 3);
  CHECK(j.at("blocks").empty());
}

TEST_CASE("metrics JSON uses the documented field names") {
  const Metrics m = compute_metrics(
      {{0, 1, 0}, {2, 3, 0}, {4, 5, 0}, {6, 7, 1}}, 2);
  const json j = metrics_to_json(m);
  CHECK(j.at("n") == 2);
  CHECK(j.at("edges") == 4);
  CHECK(j.at("sizes") == json::array({3, 1}));
  CHECK(j.at("imbalance").get<double>() == doctest::Approx(1.5));
  CHECK(j.at("imbalance_num") == 6);
  CHECK(j.at("imbalance_den") == 4);
  CHECK(j.at("rf_max") == 1);
  CHECK(j.at("rf_histogram").at("1") == 8);
  CHECK(j.contains("rf_avg"));
}

TEST_CASE("report JSON mirrors the verification report") {
  const SystemReport report = verify_system(materialize(plan_layout(7)));
  const json j = report_to_json(report);
  CHECK(j.at("valid") == true);
  CHECK(j.at("intersecting") == true);
  CHECK(j.at("balanced") == true);
  CHECK(j.at("epsilon").get<double>() <= 1e-12);
  CHECK(j.at("cardinality") == 3);
  CHECK(j.at("per_element_mass").size() == 7);
}
