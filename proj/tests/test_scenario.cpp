#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace lcac;

namespace {

std::string sample(const std::string& name) { return std::string(LCAC_SAMPLES_DIR) + "/" + name; }

Json base_scenario() {
  return Json::parse(R"({
    "schema": 1,
    "ambient": {"m": 2, "c": 0, "f": 0, "f_prime": 0},
    "submanifold": {"kind": "algebraic_point", "frame": [[0,0,0,0,1],[1,0,0,0,0],[0,0,1,0,0]]},
    "checks": ["scalar"]
  })");
}

std::string schema_message(const Json& j) {
  try {
    parse_scenario(j);
  } catch (const SchemaError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(RunScenario, FlatAllChecksFlagsEveryEquality) {
  const auto res = run_scenario(sample("flat_r5_geodesic.json"));
  ASSERT_EQ(res.exit_code, 0) << res.report.dump(2);
  EXPECT_TRUE(res.report["verdict"].get<bool>());
  int reports = 0;
  for (const auto& c : res.report["checks"]) {
    if (!c.contains("reports")) continue;
    for (const auto& r : c["reports"]) {
      EXPECT_TRUE(r["equality"].get<bool>()) << r["name"];
      ++reports;
    }
  }
  EXPECT_GT(reports, 10);
}

TEST(RunScenario, InvariantC4Equalities) {
  const auto res = run_scenario(sample("invariant_c4.json"));
  ASSERT_EQ(res.exit_code, 0);
  int inv = 0;
  for (const auto& c : res.report["checks"])
    for (const auto& r : c["reports"])
      if (r["name"] == "scalar-lc-inv" || r["name"] == "ricci-inv") {
        EXPECT_TRUE(r["equality"].get<bool>());
        ++inv;
      }
  EXPECT_EQ(inv, 3);
}

TEST(RunScenario, KOutOfRange) {
  const auto res = run_scenario(sample("k_out_of_range.json"));
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.report["error"]["message"].get<std::string>().find("k out of range [2,3]"), std::string::npos);
}

TEST(RunScenario, HypothesisViolationIsNamed) {
  const auto res = run_scenario(sample("xi_not_tangent.json"));
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_EQ(res.report["error"]["kind"], "hypothesis violation");
}

TEST(RunScenario, FailingCheckExitsOne) {
  const auto res = run_scenario(sample("gauss_tight_tolerance.json"));
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_FALSE(res.report["verdict"].get<bool>());
}

TEST(RunScenario, MissingFile) { EXPECT_EQ(run_scenario(sample("does_not_exist.json")).exit_code, 2); }

TEST(RunScenario, ChecksRunInDeclaredOrder) {
  Json j = base_scenario();
  j["checks"] = {"classify", "identity_tau", "structure", "scalar"};
  const auto res = execute(parse_scenario(j));
  ASSERT_EQ(res.report["checks"].size(), 4u);
  EXPECT_EQ(res.report["checks"][0]["check"], "classify");
  EXPECT_EQ(res.report["checks"][2]["check"], "structure");
}

TEST(RunScenario, ExplicitGaussOracleOnAlgebraicPointIsConfigError) {
  Json j = base_scenario();
  j["checks"] = {"gauss_oracle"};
  EXPECT_THROW(execute(parse_scenario(j)), ConfigurationError);
}

TEST(RunScenario, DirectionsMustBeTangentUnitVectors) {
  Json j = base_scenario();
  j["checks"] = {"ricci"};
  j["directions"] = {{0, 1, 0, 0, 0}};
  EXPECT_THROW(execute(parse_scenario(j)), ConfigurationError);
  j["directions"] = {{2, 0, 0, 0, 0}};
  EXPECT_THROW(execute(parse_scenario(j)), ConfigurationError);
  j["directions"] = {{0.6, 0, 0.8, 0, 0}};
  EXPECT_EQ(execute(parse_scenario(j)).exit_code, 0);
}

TEST(Schema, FieldDiagnostics) {
  Json j = base_scenario();
  j.erase("schema");
  EXPECT_NE(schema_message(j).find(".schema"), std::string::npos);
  j = base_scenario();
  j["schema"] = 2;
  EXPECT_NE(schema_message(j).find("unsupported version"), std::string::npos);
  j = base_scenario();
  j["ambient"]["c"] = "big";
  EXPECT_NE(schema_message(j).find(".ambient.c"), std::string::npos);
  j = base_scenario();
  j["submanifold"]["frame"][1] = {1, 0, 0};
  EXPECT_NE(schema_message(j).find(".submanifold.frame[1]"), std::string::npos);
  j = base_scenario();
  j["checks"] = {"scalar", "teleport"};
  EXPECT_NE(schema_message(j).find(".checks[1]"), std::string::npos);
  j = base_scenario();
  j["submanifold"]["name"] = "sphere_cylinder";
  EXPECT_NE(schema_message(j).find("cannot also carry"), std::string::npos);
  j = base_scenario();
  j["submanifold"]["kind"] = "surface";
  EXPECT_NE(schema_message(j).find(".submanifold.kind"), std::string::npos);
}

TEST(Schema, JsonSyntaxErrorReportsLine) {
  try {
    parse_scenario_text("{\n  \"schema\": 1,\n  \"ambient\": {\"m\": 2,,}\n}");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Schema, UnknownImmersion) {
  Json j = Json::parse(R"({"schema": 1, "ambient": {"m": 2},
    "submanifold": {"kind": "immersion", "name": "klein_bottle", "chart_point": [0, 0, 0]}, "checks": []})");
  EXPECT_THROW(execute(parse_scenario(j)), SchemaError);
}

TEST(Schema, ImmersionNeedsFlatAmbient) {
  Json j = Json::parse(R"({"schema": 1, "ambient": {"m": 2, "c": 1},
    "submanifold": {"kind": "immersion", "name": "sphere_cylinder", "chart_point": [1, 1, 0]}, "checks": ["scalar"]})");
  EXPECT_THROW(execute(parse_scenario(j)), ConfigurationError);
}

TEST(Fuzz, ZeroSigmaFlagsScalarEquality) {
  FuzzConfig cfg;
  cfg.trials = 1;
  cfg.zero_sigma = true;
  const auto sum = fuzz(cfg);
  EXPECT_EQ(sum.violations, 0u);
  EXPECT_EQ(sum.report["bounds"]["scalar-lc"]["equality_flags"], 1);
}

TEST(Fuzz, ByteStableAcrossRunsAndThreads) {
  FuzzConfig cfg;
  cfg.trials = 500;
  cfg.seed = 42;
  const std::string a = fuzz(cfg).report.dump(2);
  const std::string b = fuzz(cfg).report.dump(2);
  cfg.jobs = 4;
  const std::string c = fuzz(cfg).report.dump(2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(Fuzz, ParameterValidation) {
  FuzzConfig cfg;
  cfg.n = 8;
  cfg.m = 3;
  EXPECT_THROW(fuzz(cfg), ConfigurationError);
  cfg.n = 1;
  EXPECT_THROW(fuzz(cfg), ConfigurationError);
  cfg.n = 3;
  cfg.trials = 0;
  EXPECT_THROW(fuzz(cfg), ConfigurationError);
}

TEST(Fuzz, DrawsHaveXiTangentAndBoundedSigma) {
  FuzzConfig cfg;
  cfg.n = 5;
  cfg.m = 3;
  for (std::size_t i = 0; i < 50; ++i) {
    const auto d = fuzz_draw(cfg, i);
    EXPECT_LT((d.point.tangent().col(0) - d.ambient.xi()).norm(), 1e-10);
    for (const auto& a : d.point.sigma()) EXPECT_LE(linalg::max_abs(a), 10.0);
    EXPECT_LE(std::abs(d.ambient.c()), 10.0);
  }
}
