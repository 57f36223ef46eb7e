#include "l5/error.hpp"
#include "l5/report.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

using namespace l5;

namespace {

std::string
run(const std::string& name, scenario::Mode mode)
{
  auto c = scenario::load_file(std::string(L5_SCENARIO_DIR) + "/" + name + ".json");
  c.mode = mode;
  return report::to_json_text(simnet::run_scenario(c));
}

}  // namespace

TEST(Report, CanonicalJson)
{
  auto text = run("two-domains-weighted", scenario::Mode::L5);
  auto doc = nlohmann::json::parse(text);
  EXPECT_EQ(doc.dump(2) + "\n", text);
  for (auto key : {"scenario", "seed", "mode", "trace_hash", "summary", "sessions", "allocations",
                   "links", "trees", "per_anchor_tags", "topology", "faults"})
    EXPECT_TRUE(doc.contains(key)) << key;
  EXPECT_EQ(doc["mode"], "l5");
  EXPECT_EQ(doc["faults"]["l3_violations"], 0);
}

TEST(Report, CompareOrientsL5OverBaseline)
{
  auto base = run("dual-path", scenario::Mode::Baseline);
  auto l5 = run("dual-path", scenario::Mode::L5);
  auto ab = report::compare(base, l5);
  auto ba = report::compare(l5, base);
  EXPECT_DOUBLE_EQ(ab.throughput_ratio, ba.throughput_ratio);
  EXPECT_GT(ab.throughput_ratio, 1.0);
  auto same = report::compare(l5, l5);
  EXPECT_DOUBLE_EQ(same.throughput_ratio, 1.0);
  EXPECT_FALSE(ab.table.empty());
  EXPECT_NO_THROW((void)nlohmann::json::parse(ab.json));
}

TEST(Report, CompareRejectsMismatchedTopologies)
{
  auto a = run("dual-path", scenario::Mode::L5);
  auto b = run("two-domains-weighted", scenario::Mode::L5);
  try {
    report::compare(a, b);
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TopologyMismatch);
  }
  try {
    report::compare("{", a);
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

TEST(Report, CostlyLinkCrossings)
{
  auto base = run("transatlantic-pubsub", scenario::Mode::Baseline);
  auto l5 = run("transatlantic-pubsub", scenario::Mode::L5);
  auto c = report::compare(base, l5);
  EXPECT_EQ(c.costly_link, "atlantic");
  ASSERT_TRUE(c.crossings_ratio);
  EXPECT_NEAR(*c.crossings_ratio, 1.0 / 3.0, 1e-9);
}
