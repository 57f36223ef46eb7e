#include "l5/error.hpp"
#include "l5/topology.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace l5;
using namespace l5::topology;

namespace {

LinkStateAdvertisement
lsa(const std::string& origin, std::uint64_t seq, std::vector<Adjacency> adj)
{
  return {parse_address(origin), seq, std::move(adj)};
}

}  // namespace

TEST(Lsa, OriginationBumpsSeq)
{
  LocalLinkState s{parse_address("a"), 0, {{parse_address("b"), 10, 5, "d"}}};
  auto one = originate_lsa(s);
  auto two = originate_lsa(s);
  EXPECT_EQ(one.seq, 1u);
  EXPECT_EQ(two.seq, 2u);
  EXPECT_EQ(s.last_seq, 2u);
  EXPECT_EQ(one.adjacencies, s.adjacencies);
}

TEST(Lsa, InstallOutcomes)
{
  TopologyDatabase db;
  auto v1 = lsa("a", 1, {{parse_address("b"), 10, 5, "d"}});
  EXPECT_EQ(db.install(v1), ReceiveOutcome::Installed);
  EXPECT_EQ(db.install(v1), ReceiveOutcome::Duplicate);
  auto v2 = lsa("a", 2, {});
  EXPECT_EQ(db.install(v2), ReceiveOutcome::Installed);
  EXPECT_EQ(db.install(v1), ReceiveOutcome::Stale);
  EXPECT_EQ(db.install(lsa("a", 2, {{parse_address("c"), 1, 1, "d"}})), ReceiveOutcome::Conflict);
  EXPECT_EQ(db.seq_of(parse_address("a")), 2u);
  EXPECT_EQ(db.lsas().at(parse_address("a")), v2);
}

TEST(Lsa, ReceiveSaysWhetherToFlood)
{
  TopologyDatabase db;
  auto [db1, flood1] = receive_lsa(db, lsa("a", 1, {}));
  EXPECT_TRUE(flood1);
  auto [db2, flood2] = receive_lsa(db1, lsa("a", 1, {}));
  EXPECT_FALSE(flood2);
  EXPECT_TRUE(db.lsas().empty());
}

TEST(Lsa, EncodingIsCanonical)
{
  auto bytes = encode(lsa("a", 3, {{parse_address("b"), 1.5, 7, "d"}}));
  // origin "a", seq, count, neighbor "b", capacity bits, latency, domain "d"
  std::size_t expected = (4 + 1) + 8 + 4 + (4 + 1) + 8 + 8 + (4 + 1);
  EXPECT_EQ(bytes.size(), expected);
  EXPECT_EQ(bytes[3], 1);
  EXPECT_EQ(bytes[4], 'a');
  EXPECT_EQ(bytes[12], 3);
}

TEST(Graph, HostsAreMirroredLeaves)
{
  TopologyDatabase db;
  db.install(lsa("a", 1, {{parse_address("b"), 10, 5, "d"}, {parse_address("h"), 100, 1, "d"}}));
  db.install(lsa("b", 1, {{parse_address("a"), 10, 5, "d"}}));
  const auto& g = db.graph();
  EXPECT_TRUE(g.is_anchor(parse_address("a")));
  EXPECT_FALSE(g.is_anchor(parse_address("h")));
  ASSERT_NE(g.edge(parse_address("h"), parse_address("a")), nullptr);
  EXPECT_EQ(g.edge(parse_address("h"), parse_address("a"))->latency_us, 1u);
  EXPECT_EQ(g.edges_from(parse_address("h")).size(), 1u);
}

TEST(Converge, MatchesBreadthFirstFloodOracle)
{
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t n = oracle::uniform(rng, 1, 20);
    bool connected = trial % 5 != 0;
    auto g = oracle::random_graph(rng, n, oracle::uniform(rng, 0, 3), oracle::uniform(rng, 0, 2 * n),
                                   connected);
    auto net = oracle::flood_network(g);
    auto res = converge(net);
    EXPECT_EQ(res.conflicts, 0u);
    std::uint64_t total = 0;
    for (const auto& a : g.anchors) {
      auto count = res.per_origination.at({parse_address(a), 1});
      EXPECT_EQ(count, oracle::expected_flood_transmissions(g, a)) << "origin " << a;
      EXPECT_LE(count, 2 * g.edges.size());
      total += count;
    }
    EXPECT_EQ(res.transmissions, total);
    if (connected) {
      auto want = oracle::database_of(g);
      for (const auto& [name, db] : res.databases)
        EXPECT_EQ(db.encode(), want.encode()) << name.str();
    }
    EXPECT_EQ(count_peer_links(net), g.edges.size());
  }
}

TEST(Converge, PartitionsKeepSeparateDatabases)
{
  oracle::GraphSpec g;
  g.anchors = {"a0", "a1", "a2", "a3"};
  g.edges = {{"a0", "a1", 1, 10}, {"a2", "a3", 1, 10}};
  auto res = converge(oracle::flood_network(g));
  const auto& d0 = res.databases.at(parse_address("a0"));
  const auto& d2 = res.databases.at(parse_address("a2"));
  EXPECT_EQ(d0.lsas().size(), 2u);
  EXPECT_EQ(d2.lsas().size(), 2u);
  EXPECT_FALSE(d0 == d2);
  EXPECT_TRUE(d0 == res.databases.at(parse_address("a1")));
}
