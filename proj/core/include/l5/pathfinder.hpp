#pragma once

// Anchor-level path selection: up to k edge-disjoint paths between two L5
// names over a converged topology, chosen by repeated shortest-path search
// with removal of the anchor-anchor links already used.

#include "l5/addressing.hpp"
#include "l5/topology.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace l5::pathfinder {

using PathId = std::uint32_t;

struct L5Path {
  std::vector<L5Address> hops;
  /// L3 domain carrying hop i -> i+1 (size hops.size() - 1).
  std::vector<std::string> link_domains;
  PathId path_id = 0;
  std::uint64_t metric_us = 0;
  double min_capacity_mbps = 0;

  friend bool operator==(const L5Path&, const L5Path&) = default;
};

/// Unordered pair of anchors; the unit of disjointness.
using AnchorLink = std::pair<L5Address, L5Address>;

inline AnchorLink
anchor_link(const L5Address& a, const L5Address& b)
{
  return a < b ? AnchorLink{a, b} : AnchorLink{b, a};
}

/// Anchor-anchor links traversed by `path` (access links to hosts excluded).
std::set<AnchorLink> anchor_links(const topology::TopologyGraph& graph, const L5Path& path);

/// Lowest (metric, hop-name sequence) path from src to dst that avoids the
/// `excluded` anchor links. Only anchors may be intermediate hops.
std::optional<L5Path> shortest_path(const topology::TopologyGraph& graph, const L5Address& src,
                                    const L5Address& dst,
                                    const std::set<AnchorLink>& excluded = {});

/// Returns 0..k pairwise edge-disjoint paths ordered by (metric, hops), with
/// path ids 0, 1, ... in that order. Disconnected endpoints give an empty
/// list. Throws Error{UnknownEndpoint} if src or dst is not in the graph and
/// std::invalid_argument for k == 0.
std::vector<L5Path> k_disjoint_paths(const topology::TopologyGraph& graph, const L5Address& src,
                                     const L5Address& dst, std::size_t k);

inline std::vector<L5Path>
k_disjoint_paths(const topology::TopologyDatabase& db, const L5Address& src,
                 const L5Address& dst, std::size_t k)
{
  return k_disjoint_paths(db.graph(), src, dst, k);
}

/// The locator of `hop` inside `domain`, or its lowest locator when `domain`
/// is empty. Throws Error{UnknownEndpoint}.
L3Locator hop_locator(const ResolverTable& resolver, const L5Address& hop,
                      const std::string& domain = {});

/// The L3 destination a segment carries when it leaves hops[0]: the locator
/// of hops[1], never anything further along. Throws Error{UnknownEndpoint}
/// and std::invalid_argument for paths shorter than two hops.
L3Locator first_hop_locator(const L5Path& path, const ResolverTable& resolver);

/// Recomputes metric and bottleneck of `hops` against `graph`; nullopt if
/// some consecutive pair is not adjacent.
std::optional<L5Path> describe_path(const topology::TopologyGraph& graph,
                                    const std::vector<L5Address>& hops);

}  // namespace l5::pathfinder
