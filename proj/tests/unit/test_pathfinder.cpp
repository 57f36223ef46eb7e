#include "l5/error.hpp"
#include "l5/pathfinder.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace l5;
using namespace l5::pathfinder;

namespace {

std::vector<std::string>
names(const L5Path& p)
{
  std::vector<std::string> out;
  for (const auto& h : p.hops)
    out.push_back(h.str());
  return out;
}

oracle::GraphSpec
diamond()
{
  // h0 - a0 ={a1,a2}= a3 - h1, with a1 shorter than a2
  oracle::GraphSpec g;
  g.anchors = {"a0", "a1", "a2", "a3"};
  g.edges = {{"a0", "a1", 1, 100}, {"a1", "a3", 1, 50}, {"a0", "a2", 2, 100}, {"a2", "a3", 2, 100}};
  g.hosts = {{"h0", "a0"}, {"h1", "a3"}};
  g.host_latency = {{"h0", 1}, {"h1", 1}};
  return g;
}

}  // namespace

TEST(Pathfinder, DiamondGivesTwoDisjointPaths)
{
  auto db = oracle::database_of(diamond());
  auto paths = k_disjoint_paths(db, parse_address("h0"), parse_address("h1"), 3);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(names(paths[0]), (std::vector<std::string>{"h0", "a0", "a1", "a3", "h1"}));
  EXPECT_EQ(names(paths[1]), (std::vector<std::string>{"h0", "a0", "a2", "a3", "h1"}));
  EXPECT_EQ(paths[0].metric_us, 4u);
  EXPECT_EQ(paths[1].metric_us, 6u);
  EXPECT_EQ(paths[0].path_id, 0u);
  EXPECT_EQ(paths[1].path_id, 1u);
  EXPECT_DOUBLE_EQ(paths[0].min_capacity_mbps, 50);
  EXPECT_EQ(paths[0].link_domains, (std::vector<std::string>(4, "d")));
}

TEST(Pathfinder, HostsNeverTransit)
{
  // a0 - h0 - ... cannot be used as a shortcut even though h0 "touches" a0 only
  oracle::GraphSpec g;
  g.anchors = {"a0", "a1"};
  g.hosts = {{"h0", "a0"}, {"h1", "a1"}};
  g.host_latency = {{"h0", 1}, {"h1", 1}};
  auto db = oracle::database_of(g);
  EXPECT_TRUE(k_disjoint_paths(db, parse_address("h0"), parse_address("h1"), 2).empty());
}

TEST(Pathfinder, Errors)
{
  auto db = oracle::database_of(diamond());
  EXPECT_THROW(k_disjoint_paths(db, parse_address("h0"), parse_address("h1"), 0), std::invalid_argument);
  try {
    k_disjoint_paths(db, parse_address("h0"), parse_address("ghost"), 1);
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownEndpoint);
  }
}

TEST(Pathfinder, ExclusionAvoidsLinks)
{
  auto db = oracle::database_of(diamond());
  auto p = shortest_path(db.graph(), parse_address("h0"), parse_address("h1"),
                         {anchor_link(parse_address("a3"), parse_address("a1"))});
  ASSERT_TRUE(p);
  EXPECT_EQ(names(*p), (std::vector<std::string>{"h0", "a0", "a2", "a3", "h1"}));
  EXPECT_EQ(anchor_links(db.graph(), *p).size(), 2u);
}

TEST(Pathfinder, FirstHopIsNeverFurtherAlong)
{
  auto db = oracle::database_of(diamond());
  auto p = k_disjoint_paths(db, parse_address("h0"), parse_address("h1"), 1).at(0);
  ResolverTable r({{"d", "x0"}, {"d", "x1"}, {"e", "x1"}});
  r = r.registered(parse_address("a0"), {"e", "x1"}).registered(parse_address("a0"), {"d", "x0"});
  EXPECT_EQ(first_hop_locator(p, r), (L3Locator{"d", "x0"}));
  EXPECT_EQ(hop_locator(r, parse_address("a0")), (L3Locator{"d", "x0"}));
  EXPECT_EQ(hop_locator(r, parse_address("a0"), "e"), (L3Locator{"e", "x1"}));
}

TEST(Pathfinder, MatchesExhaustiveEnumeration)
{
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t hosts = oracle::uniform(rng, 0, 2);
    std::size_t anchors = oracle::uniform(rng, 2, 8 - hosts);
    auto g = oracle::random_graph(rng, anchors, hosts, oracle::uniform(rng, 0, 12), trial % 4 != 0);
    auto db = oracle::database_of(g);
    auto nodes = g.nodes();
    auto src = nodes[oracle::uniform(rng, 0, nodes.size() - 1)];
    auto dst = nodes[oracle::uniform(rng, 0, nodes.size() - 1)];
    std::size_t k = oracle::uniform(rng, 1, 4);
    if (!db.graph().contains(parse_address(src)) || !db.graph().contains(parse_address(dst)))
      continue;
    auto got = k_disjoint_paths(db, parse_address(src), parse_address(dst), k);
    auto want = oracle::enumerate_disjoint(g, src, dst, k);
    ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(names(got[i]), want[i].hops) << "trial " << trial << " path " << i;
      EXPECT_EQ(got[i].metric_us, want[i].metric);
    }
  }
}
