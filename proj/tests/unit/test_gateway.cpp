#include "l5/error.hpp"
#include "l5/gateway.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace l5;
using namespace l5::gateway;

namespace {

L5Address
A(const std::string& s)
{
  return parse_address(s);
}

struct World {
  ResolverTable resolver{{{"d", "p0"}, {"d", "p1"}, {"d", "p2"}, {"d", "p3"}}};
  std::map<L5Address, Gateway> gateways;
  topology::TopologyDatabase db;

  World()
  {
    // a0 - a1 (1), a0 - a2 (1), a0 - a3 (5)
    oracle::GraphSpec g;
    g.anchors = {"a0", "a1", "a2", "a3"};
    g.edges = {{"a0", "a1", 1, 10}, {"a0", "a2", 1, 10}, {"a0", "a3", 5, 10}};
    db = oracle::database_of(g);
    for (int i = 0; i < 4; ++i) {
      auto name = A("a" + std::to_string(i));
      L3Locator loc{"d", "p" + std::to_string(i)};
      resolver = resolver.registered(name, loc);
      gateways[name] = Gateway{name, loc, {}};
    }
  }
};

}  // namespace

TEST(Catalog, TtlIsInclusive)
{
  World w;
  auto name = data_name("cms.calib");
  auto r = stage_object(w.gateways.at(A("a1")), w.resolver, name, 1000, 50, 100);
  EXPECT_EQ(r.resolve(name), (std::set<L3Locator>{{"d", "p1"}}));
  auto& cat = w.gateways.at(A("a1")).catalog;
  ASSERT_TRUE(cat.lookup(name, 150));
  EXPECT_EQ(cat.lookup(name, 150)->content_hash, wire::fnv1a64(*synthetic_content(name, 1000)));
  EXPECT_FALSE(cat.lookup(name, 151));
  EXPECT_EQ(cat.size(), 0u);
}

TEST(Catalog, SweepDropsExpired)
{
  World w;
  auto& gw = w.gateways.at(A("a1"));
  stage_object(gw, w.resolver, data_name("x.one"), 10, 5, 0);
  stage_object(gw, w.resolver, data_name("x.two"), 10, 500, 0);
  EXPECT_EQ(gw.catalog.sweep(5), 0u);
  EXPECT_EQ(gw.catalog.sweep(6), 1u);
  EXPECT_EQ(gw.catalog.size(), 1u);
}

TEST(Catalog, OnlyDataNames)
{
  World w;
  try {
    stage_object(w.gateways.at(A("a1")), w.resolver, A("endpoint"), 10, 5, 0);
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotDataName);
  }
}

TEST(Catalog, ContentIsKeyedByName)
{
  EXPECT_EQ(*synthetic_content(data_name("a.b"), 64), *synthetic_content(data_name("A.B"), 64));
  EXPECT_NE(*synthetic_content(data_name("a.b"), 64), *synthetic_content(data_name("a.c"), 64));
}

TEST(Plan, PrefersLocalThenTreeThenNearest)
{
  World w;
  auto name = data_name("lhc.sample");
  w.resolver = stage_object(w.gateways.at(A("a3")), w.resolver, name, 100, 1000, 0);
  w.resolver = stage_object(w.gateways.at(A("a2")), w.resolver, name, 100, 1000, 0);
  w.resolver = stage_object(w.gateways.at(A("a1")), w.resolver, name, 100, 1000, 0);

  auto plan = plan_subscription(A("a0"), name, 10, w.resolver, w.db.graph(), w.gateways);
  ASSERT_TRUE(std::holds_alternative<UnicastFrom>(plan));
  // a1 and a2 tie on metric; the name breaks it
  EXPECT_EQ(std::get<UnicastFrom>(plan).source, A("a1"));
  EXPECT_EQ(std::get<UnicastFrom>(plan).metric_us, 1u);

  auto local = plan_subscription(A("a2"), name, 10, w.resolver, w.db.graph(), w.gateways);
  EXPECT_TRUE(std::holds_alternative<LocalHit>(local));

  auto tree = plan_subscription(A("a0"), name, 10, w.resolver, w.db.graph(), w.gateways, {{name, 4}});
  ASSERT_TRUE(std::holds_alternative<JoinTree>(tree));
  EXPECT_EQ(std::get<JoinTree>(tree).tree, 4u);
}

TEST(Plan, ExpiredCopiesAreIgnored)
{
  World w;
  auto name = data_name("lhc.sample");
  w.resolver = stage_object(w.gateways.at(A("a1")), w.resolver, name, 100, 10, 0);
  w.resolver = stage_object(w.gateways.at(A("a3")), w.resolver, name, 100, 1000, 0);
  auto plan = plan_subscription(A("a0"), name, 11, w.resolver, w.db.graph(), w.gateways);
  ASSERT_TRUE(std::holds_alternative<UnicastFrom>(plan));
  EXPECT_EQ(std::get<UnicastFrom>(plan).source, A("a3"));
  try {
    plan_subscription(A("a0"), name, 2000, w.resolver, w.db.graph(), w.gateways);
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ObjectUnavailable);
  }
  try {
    plan_subscription(A("a0"), data_name("never.staged"), 0, w.resolver, w.db.graph(), w.gateways);
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ObjectUnavailable);
  }
}

TEST(Replica, StoredCopyServesLaterRequests)
{
  World w;
  auto name = data_name("lhc.sample");
  auto bytes = synthetic_content(name, 300);
  w.resolver = store_replica(w.gateways.at(A("a2")), w.resolver, name, bytes, 100, 7);
  auto hit = plan_subscription(A("a2"), name, 8, w.resolver, w.db.graph(), w.gateways);
  ASSERT_TRUE(std::holds_alternative<LocalHit>(hit));
  EXPECT_EQ(std::get<LocalHit>(hit).object.content_hash, wire::fnv1a64(*bytes));
  EXPECT_EQ(std::get<LocalHit>(hit).object.staged_at, 7u);
}
