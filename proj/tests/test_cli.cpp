#include <doctest.h>

#include "valdisc/cli.hpp"

using namespace valdisc::cli;

namespace {

json run(const json& raw) { return run_scenario(normalize_config(raw)); }

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(normalize_config(json::array()), SchemaError);
  CHECK_THROWS_AS(normalize_config({{"scenario", "nope"}}), SchemaError);
  CHECK_THROWS_AS(normalize_config({{"scenario", "degree-p"}, {"bogus", 1}}), SchemaError);
  CHECK_THROWS_AS(normalize_config({{"scenario", "degree-p"}, {"p", 4}}), SchemaError);
  CHECK_THROWS_AS(normalize_config({{"scenario", "degree-p"}, {"precision", "0"}}), SchemaError);
  CHECK_THROWS_AS(normalize_config({{"scenario", "degree-p"}, {"precision", "x"}}), SchemaError);
  CHECK_THROWS_AS(normalize_config({{"scenario", "degree-p"}, {"seed", -1}}), SchemaError);
  CHECK_THROWS_AS(normalize_config({{"scenario", "tower"}}, {"pbasis", "", {}}), SchemaError);
  CHECK_THROWS_AS(normalize_config({{"scenario", "tower"}, {"tower", {{"base", {{"type", "laurent"}}}}}}), SchemaError);
  json c = normalize_config({{"scenario", "degree-p"}}, {"", "1/64", 9});
  CHECK(c["precision"] == "1/64");
  CHECK(c["seed"] == 9);
  CHECK(normalize_config(c) == c);
  CHECK(config_hash(c) == config_hash(normalize_config(c)));
  CHECK(config_hash(c) != config_hash(normalize_config({{"scenario", "degree-p"}})));
}

TEST_CASE("module examples through the runner") {
  json r = run({{"scenario", "degree-p"}, {"p", 2}, {"x", "1+t^(1/2)"}})["results"];
  CHECK(r["discrepancy"]["exact"] == "1/2");
  CHECK(r["ndist"]["reason"] == "support-criterion");
  r = run({{"scenario", "defect-example"}, {"p", 2}, {"gaps", {1, 2, 4, 7}}, {"precision", "1/512"}})["results"];
  CHECK(r["ndist"]["lower"] == "3/8");
  CHECK(r["defect"]["defect_ub"] == 2);
  r = run({{"scenario", "valuation-basis"},
           {"samples", 200},
           {"reduction", {{"node", "R"}, {"basis", {"1", "s"}}, {"w", "1 + s"}}}})["results"];
  CHECK(r["defect"]["defectless"] == true);
  CHECK(r["reduction"]["dropped"] == 0);
  CHECK(r["reduction"]["failures"] == 0);
}

TEST_CASE("every report verifies and tampering is located") {
  for (const char* sc : {"degree-p", "defect-example", "improve", "tower", "pbasis", "valuation-basis"}) {
    json rep = run(default_config(sc));
    CHECK_MESSAGE(verify_report(rep).ok, sc);
  }
  json rep = run(default_config("degree-p"));
  json bad = rep;
  bad["results"]["discrepancy"]["exact"] = "1/3";
  auto v = verify_report(bad);
  CHECK_FALSE(v.ok);
  CHECK(v.field == "/results/discrepancy/exact");

  bad = rep;
  bad["checks"][0]["value"] = "7";
  v = verify_report(bad);
  CHECK_FALSE(v.ok);
  CHECK(v.field == "/checks/0/value");

  bad = rep;
  bad["config"]["seed"] = 2;
  v = verify_report(bad);
  CHECK(v.field == "/config_hash");

  bad = rep;
  bad.erase("results");
  CHECK(verify_report(bad).field == "/results");
}

TEST_CASE("finer precision leaves coarse-window values unchanged") {
  json a = run({{"scenario", "defect-example"}, {"precision", "1/512"}})["results"];
  json b = run({{"scenario", "defect-example"}, {"precision", "1/1024"}})["results"];
  CHECK(a["ndist"]["chain"] == b["ndist"]["chain"]);
  CHECK(a["ndist"]["lower"] == b["ndist"]["lower"]);
  CHECK(a["discrepancy"]["lower"] == b["discrepancy"]["lower"]);
  CHECK(a["defect"] == b["defect"]);
  CHECK(a["residual"] == "AtLeast(-1/256)");
  CHECK(b["residual"] == "AtLeast(-1/512)");
  // the finer root extends the coarse one
  const auto& ra = a["root_exponents"];
  const auto& rb = b["root_exponents"];
  REQUIRE(rb.size() >= ra.size());
  for (std::size_t i = 0; i < ra.size(); ++i) CHECK(ra[i] == rb[i]);
}

TEST_CASE("reports are byte-identical across runs") {
  for (const char* sc : {"defect-example", "pbasis", "valuation-basis"}) {
    json cfg = normalize_config(default_config(sc));
    CHECK(dump_report(run_scenario(cfg)) == dump_report(run_scenario(cfg)));
  }
}
