#pragma once

// One-to-many distribution over a shortest-path tree of anchor links rooted
// at the publisher's anchor. Every payload segment crosses every tree edge
// once; branch anchors duplicate.

#include "l5/addressing.hpp"
#include "l5/pathfinder.hpp"
#include "l5/rational.hpp"
#include "l5/topology.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace l5::pubsub {

using pathfinder::AnchorLink;

/// Expense per undirected anchor link; links not listed cost their latency.
using CostMap = std::map<AnchorLink, Rational>;

struct TreeEdge {
  L5Address parent;
  L5Address child;
  friend auto operator<=>(const TreeEdge&, const TreeEdge&) = default;
  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

struct DistributionTree {
  L5Address publisher;
  L5Address root;  ///< publisher's anchor
  std::set<TreeEdge> edges;
  std::set<L5Address> subscribers;
  std::map<L5Address, L5Address> attachment;  ///< subscriber -> its anchor
  CostMap link_cost;
  /// Shortest-path-tree predecessor and distance of every anchor reachable
  /// from the root, kept so later joins graft onto the same tree.
  std::map<L5Address, L5Address> spt_parent;
  std::map<L5Address, Rational> spt_distance;

  std::set<L5Address> nodes() const;
  std::vector<L5Address> children(const L5Address& node) const;
  /// Root-to-node anchor sequence through spt_parent.
  std::vector<L5Address> spt_path(const L5Address& anchor) const;
};

Rational link_cost(const topology::TopologyGraph& graph, const CostMap& cost, const L5Address& a,
                   const L5Address& b);

/// The anchor an L5 name attaches to: itself for an anchor, its single
/// advertised neighbor for a host. Throws Error{UnknownEndpoint}.
L5Address attachment_anchor(const topology::TopologyGraph& graph, const L5Address& node);

/// Union of the cost-shortest paths from the publisher's anchor to each
/// subscriber's anchor, ties broken by the hop-name sequence. Throws
/// Error{UnknownEndpoint} for names outside the topology and Error{Unreachable}
/// naming every subscriber that cannot be reached.
DistributionTree build_tree(const topology::TopologyGraph& graph, const L5Address& publisher,
                            const std::set<L5Address>& subscribers, const CostMap& cost = {});

inline DistributionTree
build_tree(const topology::TopologyDatabase& db, const L5Address& publisher,
           const std::set<L5Address>& subscribers, const CostMap& cost = {})
{
  return build_tree(db.graph(), publisher, subscribers, cost);
}

/// Adds `subscriber` along its shortest-path-tree branch. Returns the edges
/// that were not already part of the tree, parent-first.
std::vector<TreeEdge> graft(DistributionTree& tree, const topology::TopologyGraph& graph,
                            const L5Address& subscriber);

/// True when `tree.edges` is a tree over nodes() rooted at `tree.root` that
/// reaches every subscriber's anchor.
bool is_valid_tree(const DistributionTree& tree);

enum class EdgeKind : std::uint8_t { AccessUp, Tree, AccessDown };

/// One hop-by-hop leg of the distribution: publisher to root, each tree edge,
/// and each subscriber's anchor to the subscriber (legs between a node and
/// itself are omitted).
struct DeliveryEdge {
  L5Address from;
  L5Address to;
  EdgeKind kind = EdgeKind::Tree;
  friend bool operator==(const DeliveryEdge&, const DeliveryEdge&) = default;
};

/// Parents always precede their children.
std::vector<DeliveryEdge> delivery_edges(const DistributionTree& tree);

using LinkUses = std::map<AnchorLink, std::uint64_t>;

LinkUses tree_link_uses(const DistributionTree& tree);
/// Uses if every subscriber were served by its own root-rooted shortest path.
LinkUses unicast_link_uses(const DistributionTree& tree);
Rational weighted_crossings(const topology::TopologyGraph& graph, const LinkUses& uses,
                            const CostMap& cost);

}  // namespace l5::pubsub
