#pragma once

// Single-area link-state discovery among anchor points. Each anchor floods a
// sequence-numbered advertisement of its adjacencies; (origin, seq) dedup
// bounds the flood and all anchors in a component end with the same database.

#include "l5/addressing.hpp"
#include "l5/wire.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace l5::topology {

struct Adjacency {
  L5Address neighbor;
  double capacity_mbps = 0;
  std::uint64_t latency_us = 0;
  std::string domain_id;

  friend bool operator==(const Adjacency&, const Adjacency&) = default;
};

struct LinkStateAdvertisement {
  L5Address origin;
  std::uint64_t seq = 0;
  std::vector<Adjacency> adjacencies;  ///< sorted by neighbor

  friend bool operator==(const LinkStateAdvertisement&, const LinkStateAdvertisement&) = default;
};

/// Canonical encoding: origin, seq, count, then per adjacency neighbor,
/// capacity (IEEE-754 bits), latency, domain. Integers big-endian, strings
/// u32-length-prefixed.
std::vector<std::uint8_t> encode(const LinkStateAdvertisement& lsa);
void encode(wire::Writer& out, const LinkStateAdvertisement& lsa);

/// What an anchor knows about its own ports; input to origination.
struct LocalLinkState {
  L5Address self;
  std::uint64_t last_seq = 0;
  std::vector<Adjacency> adjacencies;
};

/// Bumps `state.last_seq` and snapshots the current adjacencies.
LinkStateAdvertisement originate_lsa(LocalLinkState& state);

struct GraphEdge {
  L5Address to;
  double capacity_mbps = 0;
  std::uint64_t latency_us = 0;
  std::string domain_id;
};

/// Weighted digraph derived from the advertisements. Anchors are the
/// advertisement origins; any neighbor that never advertises (a host) is a
/// leaf and gets the mirror of the edge that names it.
class TopologyGraph {
 public:
  bool contains(const L5Address& node) const { return m_out.contains(node); }
  bool is_anchor(const L5Address& node) const { return m_anchors.contains(node); }
  const std::vector<GraphEdge>& edges_from(const L5Address& node) const;
  const GraphEdge* edge(const L5Address& from, const L5Address& to) const;
  const std::map<L5Address, std::vector<GraphEdge>>& adjacency() const noexcept { return m_out; }
  const std::set<L5Address>& anchors() const noexcept { return m_anchors; }

 private:
  friend class TopologyDatabase;
  std::map<L5Address, std::vector<GraphEdge>> m_out;
  std::set<L5Address> m_anchors;
};

enum class ReceiveOutcome { Installed, Duplicate, Stale, Conflict };

class TopologyDatabase {
 public:
  /// Newer seq replaces; equal seq with identical content is a Duplicate,
  /// equal seq with different content a Conflict. Only Installed changes
  /// the database.
  ReceiveOutcome install(const LinkStateAdvertisement& lsa);

  const std::map<L5Address, LinkStateAdvertisement>& lsas() const noexcept { return m_lsas; }
  const TopologyGraph& graph() const noexcept { return m_graph; }
  std::optional<std::uint64_t> seq_of(const L5Address& origin) const;

  /// Concatenated LSA encodings in origin order.
  std::vector<std::uint8_t> encode() const;
  std::uint64_t digest() const;

  friend bool operator==(const TopologyDatabase& a, const TopologyDatabase& b)
  {
    return a.m_lsas == b.m_lsas;
  }

 private:
  void rebuild_graph();

  std::map<L5Address, LinkStateAdvertisement> m_lsas;
  TopologyGraph m_graph;
};

/// Returns the updated database and whether the advertisement must be flooded.
std::pair<TopologyDatabase, bool> receive_lsa(const TopologyDatabase& db,
                                              const LinkStateAdvertisement& lsa);

struct FloodNode {
  LocalLinkState state;
  std::vector<L5Address> peers;  ///< flooding channels (anchor neighbors)
};

struct ConvergenceResult {
  std::map<L5Address, TopologyDatabase> databases;
  std::uint64_t transmissions = 0;
  std::map<std::pair<L5Address, std::uint64_t>, std::uint64_t> per_origination;
  std::uint64_t conflicts = 0;
};

/// Every node originates once, then advertisements are flooded over the
/// peer channels in FIFO order until nothing is in flight. A node forwards a
/// newly installed advertisement to every peer except the one it came from.
ConvergenceResult converge(const std::map<L5Address, FloodNode>& network);

/// Number of undirected peer links (both ends must be in `network`).
std::size_t count_peer_links(const std::map<L5Address, FloodNode>& network);

}  // namespace l5::topology
