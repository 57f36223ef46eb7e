#pragma once

// Anchor point: terminates L3 at its ports and forwards L5 segments by
// table lookup, rewriting the L3 destination to the next hop only.

#include "l5/addressing.hpp"
#include "l5/pathfinder.hpp"
#include "l5/session.hpp"
#include "l5/topology.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace l5::anchor {

using session::Micros;
using session::Segment;
using session::SessionId;
using pathfinder::PathId;

struct NextHop {
  L5Address address;
  L3Locator locator;
  friend bool operator==(const NextHop&, const NextHop&) = default;
};

struct FlowKey {
  SessionId session = 0;
  PathId path = 0;
  friend auto operator<=>(const FlowKey&, const FlowKey&) = default;
};

/// Data goes to every downstream hop (one for unicast, one per child on a
/// distribution tree); acknowledgements go upstream.
struct ForwardingEntry {
  std::vector<NextHop> downstream;
  std::optional<NextHop> upstream;
  friend bool operator==(const ForwardingEntry&, const ForwardingEntry&) = default;
};

struct TagCounters {
  std::uint64_t segments = 0;
  std::uint64_t bytes = 0;
  friend bool operator==(const TagCounters&, const TagCounters&) = default;
};

class AnchorState {
 public:
  AnchorState(L5Address address, std::vector<L3Locator> ports);

  const L5Address& address() const noexcept { return m_address; }
  const std::vector<L3Locator>& ports() const noexcept { return m_ports; }
  bool owns(const L3Locator& loc) const;
  /// Port inside `domain`, if any.
  std::optional<L3Locator> port_in(const std::string& domain) const;

  topology::TopologyDatabase& topo() noexcept { return m_topo; }
  const topology::TopologyDatabase& topo() const noexcept { return m_topo; }
  topology::LocalLinkState& link_state() noexcept { return m_link_state; }
  const topology::LocalLinkState& link_state() const noexcept { return m_link_state; }
  std::set<L5Address> peers() const;

  /// Installs the entry for (session, path.path_id): downstream is the hop
  /// after this anchor, upstream the hop before it. Idempotent. Throws
  /// Error{NotOnPath} if this anchor is not a hop and Error{NotAdjacent} if
  /// the successor is neither a topology neighbor nor an attached host.
  void install_path(SessionId session, const pathfinder::L5Path& path,
                    const ResolverTable& resolver);

  /// Tree branch for (session, 0). Children are replaced wholesale.
  void install_branch(SessionId session, std::optional<NextHop> upstream,
                      std::vector<NextHop> children);
  void add_child(SessionId session, NextHop child);
  void remove_flow(const FlowKey& key) { m_forwarding.erase(key); }
  void remove_session(SessionId session);

  const std::map<FlowKey, ForwardingEntry>& forwarding() const noexcept { return m_forwarding; }

  /// One copy per downstream hop for data, one upstream copy for acks; each
  /// copy's l3_dest is the locator of the hop right after this anchor. Unknown
  /// flows are counted in dropped_unknown() and produce nothing.
  std::vector<Segment> forward(const Segment& segment, Micros now);

  /// Counts `copies` relayed copies of a segment that reached this anchor
  /// over a hop-by-hop leg (distribution trees) rather than through forward().
  void account(const std::string& tag, std::size_t bytes, std::uint64_t copies = 1);

  std::map<std::string, TagCounters> tag_report() const { return m_counters; }
  std::uint64_t dropped_unknown() const noexcept { return m_dropped_unknown; }
  std::uint64_t misaddressed() const noexcept { return m_misaddressed; }

 private:
  L5Address m_address;
  std::vector<L3Locator> m_ports;
  topology::TopologyDatabase m_topo;
  topology::LocalLinkState m_link_state;
  std::map<FlowKey, ForwardingEntry> m_forwarding;
  std::map<std::string, TagCounters> m_counters;
  std::uint64_t m_dropped_unknown = 0;
  std::uint64_t m_misaddressed = 0;
};

}  // namespace l5::anchor
