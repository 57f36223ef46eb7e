#include "l5/anchor.hpp"

#include "l5/error.hpp"

#include <algorithm>

namespace l5::anchor {

AnchorState::AnchorState(L5Address address, std::vector<L3Locator> ports)
  : m_address(std::move(address))
  , m_ports(std::move(ports))
{
  std::sort(m_ports.begin(), m_ports.end());
  m_link_state.self = m_address;
}

bool
AnchorState::owns(const L3Locator& loc) const
{
  return std::find(m_ports.begin(), m_ports.end(), loc) != m_ports.end();
}

std::optional<L3Locator>
AnchorState::port_in(const std::string& domain) const
{
  for (const auto& p : m_ports)
    if (p.domain_id == domain)
      return p;
  return std::nullopt;
}

std::set<L5Address>
AnchorState::peers() const
{
  std::set<L5Address> out;
  for (const auto& adj : m_link_state.adjacencies)
    out.insert(adj.neighbor);
  return out;
}

void
AnchorState::install_path(SessionId session, const pathfinder::L5Path& path,
                          const ResolverTable& resolver)
{
  auto it = std::find(path.hops.begin(), path.hops.end(), m_address);
  if (it == path.hops.end())
    throw Error(ErrorCode::NotOnPath,
                "'" + m_address.str() + "' is not a hop of path " + std::to_string(path.path_id));
  auto index = static_cast<std::size_t>(it - path.hops.begin());

  auto domain_of = [&](std::size_t link) {
    return link < path.link_domains.size() ? path.link_domains[link] : std::string{};
  };

  ForwardingEntry entry;
  if (index + 1 < path.hops.size()) {
    const auto& next = path.hops[index + 1];
    bool adjacent = m_topo.graph().edge(m_address, next) != nullptr;
    bool attached_host = std::any_of(m_link_state.adjacencies.begin(),
                                     m_link_state.adjacencies.end(),
                                     [&](const auto& a) { return a.neighbor == next; });
    if (!adjacent && !attached_host)
      throw Error(ErrorCode::NotAdjacent,
                  "'" + next.str() + "' is not a neighbor of '" + m_address.str() + "'");
    entry.downstream.push_back({next, pathfinder::hop_locator(resolver, next, domain_of(index))});
  }
  if (index > 0) {
    const auto& prev = path.hops[index - 1];
    entry.upstream = NextHop{prev, pathfinder::hop_locator(resolver, prev, domain_of(index - 1))};
  }
  m_forwarding[FlowKey{session, path.path_id}] = std::move(entry);
}

void
AnchorState::install_branch(SessionId session, std::optional<NextHop> upstream,
                            std::vector<NextHop> children)
{
  std::sort(children.begin(), children.end(),
            [](const NextHop& a, const NextHop& b) { return a.address < b.address; });
  m_forwarding[FlowKey{session, 0}] = ForwardingEntry{std::move(children), std::move(upstream)};
}

void
AnchorState::add_child(SessionId session, NextHop child)
{
  auto& entry = m_forwarding[FlowKey{session, 0}];
  if (std::find(entry.downstream.begin(), entry.downstream.end(), child) != entry.downstream.end())
    return;
  entry.downstream.push_back(std::move(child));
  std::sort(entry.downstream.begin(), entry.downstream.end(),
            [](const NextHop& a, const NextHop& b) { return a.address < b.address; });
}

void
AnchorState::remove_session(SessionId session)
{
  for (auto it = m_forwarding.begin(); it != m_forwarding.end();) {
    if (it->first.session == session)
      it = m_forwarding.erase(it);
    else
      ++it;
  }
}

void
AnchorState::account(const std::string& tag, std::size_t bytes, std::uint64_t copies)
{
  if (copies == 0)
    return;
  auto& c = m_counters[tag];
  c.segments += copies;
  c.bytes += bytes * copies;
}

std::vector<Segment>
AnchorState::forward(const Segment& segment, Micros)
{
  std::vector<Segment> out;
  if (!owns(segment.l3_dest)) {
    ++m_misaddressed;
    return out;
  }
  auto it = m_forwarding.find(FlowKey{segment.session_id, segment.path_id});
  if (it == m_forwarding.end()) {
    ++m_dropped_unknown;
    return out;
  }
  const auto& entry = it->second;

  if (segment.is_data()) {
    if (entry.downstream.empty()) {
      ++m_dropped_unknown;
      return out;
    }
    auto& counters = m_counters[segment.tag];
    for (const auto& hop : entry.downstream) {
      Segment copy = segment;
      copy.l3_dest = hop.locator;
      ++counters.segments;
      counters.bytes += segment.payload.size();
      out.push_back(std::move(copy));
    }
  }
  else {
    if (!entry.upstream) {
      ++m_dropped_unknown;
      return out;
    }
    Segment copy = segment;
    copy.l3_dest = entry.upstream->locator;
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace l5::anchor
