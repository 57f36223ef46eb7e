#include "l5/topology.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace l5::topology {

namespace {

const std::vector<GraphEdge> no_edges;

bool
adjacency_less(const Adjacency& a, const Adjacency& b)
{
  if (a.neighbor != b.neighbor)
    return a.neighbor < b.neighbor;
  return a.domain_id < b.domain_id;
}

}  // namespace

void
encode(wire::Writer& out, const LinkStateAdvertisement& lsa)
{
  out.str(lsa.origin.str());
  out.u64(lsa.seq);
  out.u32(static_cast<std::uint32_t>(lsa.adjacencies.size()));
  for (const auto& adj : lsa.adjacencies) {
    out.str(adj.neighbor.str());
    out.f64(adj.capacity_mbps);
    out.u64(adj.latency_us);
    out.str(adj.domain_id);
  }
}

std::vector<std::uint8_t>
encode(const LinkStateAdvertisement& lsa)
{
  wire::Writer out;
  encode(out, lsa);
  return std::move(out).take();
}

LinkStateAdvertisement
originate_lsa(LocalLinkState& state)
{
  LinkStateAdvertisement lsa;
  lsa.origin = state.self;
  lsa.seq = ++state.last_seq;
  lsa.adjacencies = state.adjacencies;
  std::sort(lsa.adjacencies.begin(), lsa.adjacencies.end(), adjacency_less);
  return lsa;
}

const std::vector<GraphEdge>&
TopologyGraph::edges_from(const L5Address& node) const
{
  auto it = m_out.find(node);
  return it == m_out.end() ? no_edges : it->second;
}

const GraphEdge*
TopologyGraph::edge(const L5Address& from, const L5Address& to) const
{
  for (const auto& e : edges_from(from))
    if (e.to == to)
      return &e;
  return nullptr;
}

ReceiveOutcome
TopologyDatabase::install(const LinkStateAdvertisement& lsa)
{
  auto it = m_lsas.find(lsa.origin);
  if (it != m_lsas.end()) {
    if (lsa.seq < it->second.seq)
      return ReceiveOutcome::Stale;
    if (lsa.seq == it->second.seq)
      return it->second == lsa ? ReceiveOutcome::Duplicate : ReceiveOutcome::Conflict;
    it->second = lsa;
  }
  else {
    m_lsas.emplace(lsa.origin, lsa);
  }
  rebuild_graph();
  return ReceiveOutcome::Installed;
}

std::optional<std::uint64_t>
TopologyDatabase::seq_of(const L5Address& origin) const
{
  auto it = m_lsas.find(origin);
  if (it == m_lsas.end())
    return std::nullopt;
  return it->second.seq;
}

void
TopologyDatabase::rebuild_graph()
{
  TopologyGraph g;
  for (const auto& [origin, lsa] : m_lsas) {
    g.m_anchors.insert(origin);
    auto& out = g.m_out[origin];
    for (const auto& adj : lsa.adjacencies)
      out.push_back({adj.neighbor, adj.capacity_mbps, adj.latency_us, adj.domain_id});
  }
  // leaves: mirror edges toward nodes that advertise nothing themselves
  for (const auto& [origin, lsa] : m_lsas) {
    for (const auto& adj : lsa.adjacencies) {
      if (m_lsas.contains(adj.neighbor))
        continue;
      g.m_out[adj.neighbor].push_back({origin, adj.capacity_mbps, adj.latency_us, adj.domain_id});
    }
  }
  for (auto& [node, edges] : g.m_out) {
    std::stable_sort(edges.begin(), edges.end(),
                     [](const GraphEdge& a, const GraphEdge& b) { return a.to < b.to; });
  }
  m_graph = std::move(g);
}

std::vector<std::uint8_t>
TopologyDatabase::encode() const
{
  wire::Writer out;
  out.u32(static_cast<std::uint32_t>(m_lsas.size()));
  for (const auto& [origin, lsa] : m_lsas)
    topology::encode(out, lsa);
  return std::move(out).take();
}

std::uint64_t
TopologyDatabase::digest() const
{
  wire::Fnv1a64 h;
  wire::Writer out(h);
  out.u32(static_cast<std::uint32_t>(m_lsas.size()));
  for (const auto& [origin, lsa] : m_lsas)
    topology::encode(out, lsa);
  return h.digest();
}

std::pair<TopologyDatabase, bool>
receive_lsa(const TopologyDatabase& db, const LinkStateAdvertisement& lsa)
{
  TopologyDatabase next = db;
  bool flood = next.install(lsa) == ReceiveOutcome::Installed;
  return {flood ? std::move(next) : db, flood};
}

std::size_t
count_peer_links(const std::map<L5Address, FloodNode>& network)
{
  std::set<std::pair<L5Address, L5Address>> links;
  for (const auto& [name, node] : network) {
    for (const auto& peer : node.peers) {
      if (peer == name || !network.contains(peer))
        continue;
      links.insert(std::minmax(name, peer));
    }
  }
  return links.size();
}

ConvergenceResult
converge(const std::map<L5Address, FloodNode>& network)
{
  struct Message {
    L5Address to;
    L5Address from;
    LinkStateAdvertisement lsa;
  };

  // channels are symmetric: a listing on either side opens the channel
  std::map<L5Address, std::set<L5Address>> channels;
  for (const auto& [name, node] : network) {
    channels[name];
    for (const auto& peer : node.peers) {
      if (peer == name || !network.contains(peer))
        continue;
      channels[name].insert(peer);
      channels[peer].insert(name);
    }
  }

  ConvergenceResult result;
  std::deque<Message> in_flight;
  auto send = [&](const L5Address& from, const L5Address& to, const LinkStateAdvertisement& lsa) {
    ++result.transmissions;
    ++result.per_origination[{lsa.origin, lsa.seq}];
    in_flight.push_back({to, from, lsa});
  };

  for (const auto& [name, node] : network) {
    LocalLinkState state = node.state;
    auto lsa = originate_lsa(state);
    auto& db = result.databases[name];
    db.install(lsa);
    result.per_origination[{lsa.origin, lsa.seq}];
    for (const auto& peer : channels[name])
      send(name, peer, lsa);
  }

  while (!in_flight.empty()) {
    Message msg = std::move(in_flight.front());
    in_flight.pop_front();
    auto& db = result.databases[msg.to];
    auto outcome = db.install(msg.lsa);
    if (outcome == ReceiveOutcome::Conflict)
      ++result.conflicts;
    if (outcome != ReceiveOutcome::Installed)
      continue;
    for (const auto& peer : channels[msg.to])
      if (peer != msg.from)
        send(msg.to, peer, msg.lsa);
  }
  return result;
}

}  // namespace l5::topology
