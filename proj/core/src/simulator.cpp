#include "l5/simulator.hpp"

#include "l5/allocator.hpp"
#include "l5/error.hpp"
#include "l5/event_queue.hpp"
#include "l5/gateway.hpp"
#include "l5/pathfinder.hpp"
#include "l5/pubsub.hpp"
#include "l5/session.hpp"
#include "l5/substrate.hpp"
#include "l5/topology.hpp"
#include "l5/wire.hpp"

#include <algorithm>
#include <limits>
#include <tuple>
#include <variant>

namespace l5::simnet {

namespace {

using pathfinder::L5Path;
using pathfinder::PathId;
using session::Segment;
using session::SessionId;

constexpr Micros sweep_period_us = 1'000'000;
constexpr std::size_t max_messages = 50;
constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

struct Transit {
  Segment segment;
  Route route;
  std::size_t index = 0;  ///< fires on arrival at the far end of route[index]
};
struct Deliver {
  Segment segment;
};
struct Wake {
  std::size_t sender = 0;
  std::uint64_t generation = 0;
};
struct LsaDelivery {
  L5Address to;
  L5Address from;
  topology::LinkStateAdvertisement lsa;
};
struct ScenarioAction {
  std::size_t event = 0;
};
struct Sweep {};

using Payload = std::variant<Transit, Deliver, Wake, LsaDelivery, ScenarioAction, Sweep>;

struct LinkStats {
  std::uint64_t transmitted = 0, delivered = 0, dropped = 0, in_flight = 0;
  std::uint64_t original = 0, retransmitted = 0, acks = 0, bytes = 0;
};

enum class Owner { Unicast, Leg };

struct SenderRec {
  session::SessionSender tx;
  L5Address node;
  Owner owner;
  std::size_t owner_index;
  std::uint64_t generation = 0;
  std::optional<Micros> pending;
};

struct ReceiverRec {
  session::SessionReceiver rx;
  L5Address node;
  Owner owner;
  std::size_t owner_index;
  std::size_t leg = 0;
};

struct FlowRoute {
  std::vector<L5Address> hops;
  std::vector<std::string> domains;
};

struct UnicastRec {
  std::string id;
  SessionId sid = 0;
  std::string kind;
  std::string routing;
  L5Address src, dst;
  std::string tag;
  Rational weight{1};
  std::optional<Rational> cap;
  std::shared_ptr<const std::vector<std::uint8_t>> content;
  std::uint64_t source_hash = 0;
  std::size_t sender = none;
  std::size_t receiver = none;
  Micros opened_at = 0;
  std::optional<Micros> completed_at;
  Rational potential{0}, residual{0};
  std::vector<L5Path> paths;
  std::vector<L5Path> retired;
  std::optional<std::size_t> subscription;
  L5Address object;
  Micros object_ttl = 0;
};

struct LegRec {
  pubsub::DeliveryEdge edge;
  PathId pid = 0;
  std::string domain;
  std::size_t sender = none;
  std::size_t receiver = none;
};

struct SubRec {
  L5Address anchor;
  Micros joined_at = 0;
  std::uint64_t offset = 0;
  std::size_t receiver = none;
  std::uint64_t expected_bytes = 0;
  std::uint64_t expected_hash = 0;
  bool complete = false;
  std::optional<std::size_t> subscription;
};

struct TreeRec {
  std::string id;
  SessionId sid = 0;
  std::string tag;
  Rational weight{1};
  pubsub::DistributionTree tree;
  std::shared_ptr<const std::vector<std::uint8_t>> content;
  std::optional<L5Address> object;
  Micros object_ttl = 0;
  std::vector<LegRec> legs;
  std::map<L5Address, std::vector<std::size_t>> out_legs;
  std::map<L5Address, std::size_t> in_leg;
  std::map<L5Address, SubRec> subs;
  bool started = false;
  bool complete = false;
  double tree_cost = 0, unicast_cost = 0;
};

struct NodeRec {
  bool is_anchor = false;
  std::vector<L3Locator> ports;  ///< sorted
  std::optional<L5Address> home;  ///< hosts
};

std::uint64_t
digest(std::span<const std::uint8_t> bytes)
{
  return wire::fnv1a64(bytes);
}

class Simulator {
 public:
  explicit Simulator(const scenario::ScenarioConfig& config)
    : m_config(config)
    , m_queue(config.seed)
    , m_l3(config)
    , m_trace_writer(m_trace)
  {
    m_link_stats.resize(m_l3.links().size());
    for (const auto& p : config.policy)
      m_policy.push_back({p.tag, rational_from_decimal(p.weight)});
  }

  RunResult run();

 private:
  // setup and control plane
  void build_nodes();
  std::vector<topology::Adjacency> compute_adjacencies(const L5Address& anchor);
  void originate(const L5Address& anchor);
  void flood(const L5Address& from, const topology::LinkStateAdvertisement& lsa,
             const std::optional<L5Address>& except);
  void on_lsa(LsaDelivery& d);
  void on_quiescence();
  void refresh_adjacencies();
  pubsub::CostMap anchor_costs() const;

  // data plane
  void push(Micros at, Payload p) { m_queue.push(at, std::move(p)); }
  Micros now() const { return m_queue.now(); }
  std::optional<L3Locator> port_of(const L5Address& node, const std::string& domain) const;
  void check_l3(const L5Address& node, const Segment& seg);
  void emit(const L5Address& node, Segment seg);
  void start_link(Segment seg, Route route, std::size_t index);
  void on_transit(Transit& t);
  void deliver(Segment& seg);
  void on_receive(std::size_t ri, const Segment& seg);
  void wake(std::size_t si);
  void on_wake(const Wake& w);

  // sessions
  const topology::TopologyGraph& graph_for(const L5Address& node) const;
  std::optional<Route> l3_route(const L5Path& path);
  std::set<std::string> l3_links(const L5Path& path);
  std::optional<L5Path> direct_path(const L5Address& src, const L5Address& dst);
  Rational weight_of(const std::string& tag) const;
  void install(SessionId sid, const L5Path& path);
  std::size_t open_unicast(std::string id, std::string kind, const L5Address& src,
                           const L5Address& dst, const std::string& tag,
                           std::shared_ptr<const std::vector<std::uint8_t>> content,
                           std::optional<Rational> cap);
  void unicast_progress(std::size_t ui);
  void reallocate(const std::string& cause);
  void reroute();

  // trees
  void add_leg(std::size_t ti, const pubsub::DeliveryEdge& edge);
  void publish(const scenario::Publish& p);
  void join(std::size_t ti, const L5Address& subscriber, std::optional<std::size_t> subscription);
  void relay(std::size_t ti, std::size_t leg, const std::vector<Segment>& delivered);
  void tree_progress(std::size_t ti);

  // scenario
  void on_action(std::size_t index);
  void on_sweep();
  void schedule_sweep();

  void fault(std::string message);
  void trace(const simnet::EventQueue<Payload>::Entry& e);
  RunResult report();

  const scenario::ScenarioConfig& m_config;
  EventQueue<Payload> m_queue;
  Substrate m_l3;
  wire::Fnv1a64 m_trace;
  wire::Writer m_trace_writer;
  std::uint64_t m_events = 0;

  std::vector<ScienceDomainTag> m_policy;
  std::map<L5Address, NodeRec> m_nodes;
  std::map<L3Locator, L5Address> m_owner;
  std::map<L5Address, anchor::AnchorState> m_anchors;
  std::map<L5Address, std::set<L5Address>> m_peers;
  std::map<L5Address, std::vector<L5Address>> m_homed;
  std::map<L5Address, gateway::Gateway> m_gateways;
  ResolverTable m_resolver;
  pubsub::CostMap m_costs;

  std::vector<LinkStats> m_link_stats;
  std::vector<SenderRec> m_senders;
  std::vector<ReceiverRec> m_receivers;
  std::map<std::tuple<L5Address, SessionId, PathId>, std::size_t> m_tx_at, m_rx_at;
  std::map<std::pair<SessionId, PathId>, FlowRoute> m_flows;
  std::vector<UnicastRec> m_unicasts;
  std::vector<TreeRec> m_trees;
  std::map<std::string, std::size_t> m_tree_by_id;
  std::map<L5Address, std::uint64_t> m_active_trees;
  std::vector<SubscriptionReport> m_subscriptions;
  std::vector<EpochReport> m_epochs;
  SessionId m_next_sid = 1;

  std::uint64_t m_lsa_in_flight = 0;
  bool m_discovered = false;
  bool m_sweep_scheduled = false;
  TopologyReport m_topo;
  std::map<std::pair<L5Address, std::uint64_t>, std::uint64_t> m_per_origination;
  FaultReport m_faults;
};

void
Simulator::fault(std::string message)
{
  if (m_faults.messages.size() < max_messages)
    m_faults.messages.push_back("t=" + std::to_string(now()) + " " + std::move(message));
}

// --------------------------------------------------------------- setup

void
Simulator::build_nodes()
{
  std::set<L3Locator> universe;
  for (const auto& a : m_config.anchors) {
    auto name = parse_address(a.name);
    NodeRec n;
    n.is_anchor = true;
    n.ports = a.ports;
    std::sort(n.ports.begin(), n.ports.end());
    for (const auto& p : n.ports) {
      universe.insert(p);
      m_owner[p] = name;
    }
    m_anchors.emplace(name, anchor::AnchorState(name, n.ports));
    if (a.gateway)
      m_gateways[name] = gateway::Gateway{name, n.ports.front(), {}};
    m_nodes[name] = std::move(n);
  }
  for (const auto& a : m_config.anchors) {
    auto name = parse_address(a.name);
    for (const auto& p : a.peers) {
      auto peer = parse_address(p);
      m_peers[name].insert(peer);
      m_peers[peer].insert(name);
    }
  }
  for (const auto& h : m_config.hosts) {
    auto name = parse_address(h.name);
    NodeRec n;
    n.ports = {h.locator};
    n.home = parse_address(h.home_anchor);
    universe.insert(h.locator);
    m_owner[h.locator] = name;
    m_homed[*n.home].push_back(name);
    m_nodes[name] = std::move(n);
  }
  m_resolver = ResolverTable(universe);
  for (const auto& [name, n] : m_nodes)
    for (const auto& p : n.ports)
      m_resolver = m_resolver.registered(name, p);
}

std::optional<L3Locator>
Simulator::port_of(const L5Address& node, const std::string& domain) const
{
  auto it = m_nodes.find(node);
  if (it == m_nodes.end())
    return std::nullopt;
  for (const auto& p : it->second.ports)
    if (p.domain_id == domain)
      return p;
  return std::nullopt;
}

std::vector<topology::Adjacency>
Simulator::compute_adjacencies(const L5Address& a)
{
  std::vector<topology::Adjacency> out;
  const auto& ports = m_nodes.at(a).ports;
  auto link_to = [&](const L5Address& other) -> std::optional<topology::Adjacency> {
    for (const auto& p : ports) {
      auto q = port_of(other, p.domain_id);
      if (!q)
        continue;
      auto r = m_l3.route(p, *q);
      if (!r)
        continue;
      return topology::Adjacency{other, to_double(m_l3.min_available(*r)), m_l3.latency(*r),
                                 p.domain_id};
    }
    return std::nullopt;
  };
  for (const auto& peer : m_peers[a])
    if (auto adj = link_to(peer))
      out.push_back(std::move(*adj));
  for (const auto& host : m_homed[a])
    if (auto adj = link_to(host))
      out.push_back(std::move(*adj));
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.neighbor < y.neighbor; });
  return out;
}

void
Simulator::originate(const L5Address& a)
{
  auto& st = m_anchors.at(a);
  auto lsa = topology::originate_lsa(st.link_state());
  st.topo().install(lsa);
  ++m_topo.originations;
  m_per_origination[{lsa.origin, lsa.seq}];
  flood(a, lsa, std::nullopt);
}

void
Simulator::flood(const L5Address& from, const topology::LinkStateAdvertisement& lsa,
                 const std::optional<L5Address>& except)
{
  for (const auto& adj : m_anchors.at(from).link_state().adjacencies) {
    if (!m_anchors.contains(adj.neighbor) || (except && adj.neighbor == *except))
      continue;
    ++m_lsa_in_flight;
    ++m_topo.lsa_transmissions;
    ++m_per_origination[{lsa.origin, lsa.seq}];
    push(now() + adj.latency_us, LsaDelivery{adj.neighbor, from, lsa});
  }
}

void
Simulator::on_lsa(LsaDelivery& d)
{
  --m_lsa_in_flight;
  auto outcome = m_anchors.at(d.to).topo().install(d.lsa);
  if (outcome == topology::ReceiveOutcome::Installed)
    flood(d.to, d.lsa, d.from);
  else if (outcome == topology::ReceiveOutcome::Conflict)
    fault("conflicting advertisement from " + d.lsa.origin.str() + " at " + d.to.str());
  if (m_lsa_in_flight == 0)
    on_quiescence();
}

pubsub::CostMap
Simulator::anchor_costs() const
{
  pubsub::CostMap costs;
  auto* self = const_cast<Simulator*>(this);
  for (const auto& [name, st] : m_anchors) {
    for (const auto& adj : st.link_state().adjacencies) {
      if (!m_anchors.contains(adj.neighbor))
        continue;
      auto p = port_of(name, adj.domain_id);
      auto q = port_of(adj.neighbor, adj.domain_id);
      if (!p || !q)
        continue;
      if (auto r = self->m_l3.route(*p, *q))
        costs[pathfinder::anchor_link(name, adj.neighbor)] = m_l3.cost(*r);
    }
  }
  return costs;
}

void
Simulator::on_quiescence()
{
  m_costs = anchor_costs();
  if (!m_discovered) {
    m_discovered = true;
    m_topo.discovery_done_us = now();
    bool same = true;
    const topology::TopologyDatabase* first = nullptr;
    for (const auto& [name, st] : m_anchors) {
      if (!first)
        first = &st.topo();
      else if (st.topo().encode() != first->encode())
        same = false;
    }
    m_topo.converged = same;
    for (std::size_t i = 0; i < m_config.events.size(); ++i)
      push(now() + m_config.events[i].at_us, ScenarioAction{i});
    return;
  }
  reroute();
  reallocate("topology change");
}

void
Simulator::refresh_adjacencies()
{
  for (auto& [name, st] : m_anchors) {
    auto adj = compute_adjacencies(name);
    if (adj == st.link_state().adjacencies)
      continue;
    st.link_state().adjacencies = std::move(adj);
    originate(name);
  }
  if (m_lsa_in_flight == 0)
    on_quiescence();
}

// ---------------------------------------------------------- data plane

void
Simulator::check_l3(const L5Address& node, const Segment& seg)
{
  auto it = m_flows.find({seg.session_id, seg.path_id});
  std::string why;
  if (it == m_flows.end()) {
    why = "unknown flow";
  }
  else {
    const auto& hops = it->second.hops;
    auto pos = std::find(hops.begin(), hops.end(), node);
    if (pos == hops.end()) {
      why = node.str() + " is not on the path";
    }
    else {
      auto i = static_cast<std::size_t>(pos - hops.begin());
      bool data = seg.is_data();
      if ((data && i + 1 >= hops.size()) || (!data && i == 0)) {
        why = "no next hop";
      }
      else {
        std::size_t j = data ? i + 1 : i - 1;
        const auto& domain = it->second.domains[data ? i : i - 1];
        auto expected = port_of(hops[j], domain);
        if (!expected || *expected != seg.l3_dest)
          why = "l3_dest " + seg.l3_dest.str() + " is not the locator of next hop " + hops[j].str();
      }
    }
  }
  if (!why.empty()) {
    ++m_faults.l3_violations;
    fault("L3 rule: session " + std::to_string(seg.session_id) + " path " +
          std::to_string(seg.path_id) + " at " + node.str() + ": " + why);
  }
}

void
Simulator::emit(const L5Address& node, Segment seg)
{
  check_l3(node, seg);
  auto src = port_of(node, seg.l3_dest.domain_id);
  std::optional<Route> route;
  if (src)
    route = m_l3.route(*src, seg.l3_dest);
  if (!route) {
    ++m_faults.unreachable;
    fault("no L3 route from " + node.str() + " to " + seg.l3_dest.str());
    return;
  }
  if (route->empty()) {
    push(now(), Deliver{std::move(seg)});
    return;
  }
  start_link(std::move(seg), std::move(*route), 0);
}

void
Simulator::start_link(Segment seg, Route route, std::size_t index)
{
  std::size_t li = route[index];
  const auto& link = m_l3.link(li);
  auto& st = m_link_stats[li];
  ++st.transmitted;
  if (seg.is_data()) {
    ++(seg.is_retransmit ? st.retransmitted : st.original);
    st.bytes += seg.payload.size();
  }
  else {
    ++st.acks;
  }
  if (!link.up || m_queue.bernoulli(link.loss_prob)) {
    ++st.dropped;
    return;
  }
  ++st.in_flight;
  Micros at = now() + link.latency_us + m_l3.serialization_us(li, seg.payload.size());
  push(at, Transit{std::move(seg), std::move(route), index});
}

void
Simulator::on_transit(Transit& t)
{
  std::size_t li = t.route[t.index];
  auto& st = m_link_stats[li];
  --st.in_flight;
  if (!m_l3.link(li).up) {
    ++st.dropped;
    return;
  }
  ++st.delivered;
  if (t.index + 1 < t.route.size())
    start_link(std::move(t.segment), std::move(t.route), t.index + 1);
  else
    deliver(t.segment);
}

void
Simulator::deliver(Segment& seg)
{
  auto owner = m_owner.find(seg.l3_dest);
  if (owner == m_owner.end()) {
    ++m_faults.unreachable;
    fault("nobody owns " + seg.l3_dest.str());
    return;
  }
  const L5Address& node = owner->second;
  std::tuple<L5Address, SessionId, PathId> key{node, seg.session_id, seg.path_id};
  if (seg.is_data()) {
    if (auto it = m_rx_at.find(key); it != m_rx_at.end()) {
      on_receive(it->second, seg);
      return;
    }
  }
  else if (auto it = m_tx_at.find(key); it != m_tx_at.end()) {
    m_senders[it->second].tx.on_ack(seg, now());
    wake(it->second);
    auto& rec = m_senders[it->second];
    if (rec.owner == Owner::Unicast)
      unicast_progress(rec.owner_index);
    return;
  }
  auto a = m_anchors.find(node);
  if (a == m_anchors.end()) {
    ++m_faults.dropped_unknown;
    fault("host " + node.str() + " has no endpoint for session " +
          std::to_string(seg.session_id));
    return;
  }
  for (auto& out : a->second.forward(seg, now()))
    emit(node, std::move(out));
}

void
Simulator::on_receive(std::size_t ri, const Segment& seg)
{
  auto result = m_receivers[ri].rx.on_receive(seg, now());
  L5Address node = m_receivers[ri].node;
  for (auto& ack : result.acks)
    emit(node, std::move(ack));
  const auto& rec = m_receivers[ri];
  if (rec.owner == Owner::Unicast)
    unicast_progress(rec.owner_index);
  else if (!result.delivered.empty())
    relay(rec.owner_index, rec.leg, result.delivered);
}

void
Simulator::wake(std::size_t si)
{
  auto& rec = m_senders[si];
  auto t = rec.tx.next_wakeup(now());
  if (!t)
    return;
  if (rec.pending && *rec.pending <= *t)
    return;
  ++rec.generation;
  rec.pending = *t;
  push(*t, Wake{si, rec.generation});
}

void
Simulator::on_wake(const Wake& w)
{
  auto& rec = m_senders[w.sender];
  if (w.generation != rec.generation)
    return;
  rec.pending.reset();
  L5Address node = rec.node;
  for (auto& s : rec.tx.schedule(now()))
    emit(node, std::move(s.segment));
  wake(w.sender);
}

// ------------------------------------------------------------ sessions

const topology::TopologyGraph&
Simulator::graph_for(const L5Address& node) const
{
  const auto& n = m_nodes.at(node);
  return m_anchors.at(n.is_anchor ? node : *n.home).topo().graph();
}

std::optional<Route>
Simulator::l3_route(const L5Path& path)
{
  Route all;
  for (std::size_t i = 0; i + 1 < path.hops.size(); ++i) {
    auto p = port_of(path.hops[i], path.link_domains[i]);
    auto q = port_of(path.hops[i + 1], path.link_domains[i]);
    if (!p || !q)
      return std::nullopt;
    auto r = m_l3.route(*p, *q);
    if (!r)
      return std::nullopt;
    all.insert(all.end(), r->begin(), r->end());
  }
  return all;
}

std::set<std::string>
Simulator::l3_links(const L5Path& path)
{
  std::set<std::string> ids;
  if (auto r = l3_route(path))
    for (auto l : *r)
      ids.insert(m_l3.link(l).id);
  return ids;
}

std::optional<L5Path>
Simulator::direct_path(const L5Address& src, const L5Address& dst)
{
  for (const auto& p : m_nodes.at(src).ports) {
    auto q = port_of(dst, p.domain_id);
    if (!q)
      continue;
    auto r = m_l3.route(p, *q);
    if (!r)
      continue;
    L5Path path;
    path.hops = {src, dst};
    path.link_domains = {p.domain_id};
    path.metric_us = m_l3.latency(*r);
    path.min_capacity_mbps = to_double(m_l3.min_available(*r));
    return path;
  }
  return std::nullopt;
}

Rational
Simulator::weight_of(const std::string& tag) const
{
  if (m_config.mode == scenario::Mode::Baseline)
    return 1;
  for (const auto& p : m_policy)
    if (p.tag == tag)
      return p.weight;
  return 1;
}

void
Simulator::install(SessionId sid, const L5Path& path)
{
  for (std::size_t i = 1; i + 1 < path.hops.size(); ++i) {
    auto it = m_anchors.find(path.hops[i]);
    if (it == m_anchors.end()) {
      fault("transit hop " + path.hops[i].str() + " is not an anchor");
      continue;
    }
    try {
      it->second.install_path(sid, path, m_resolver);
    }
    catch (const Error& e) {
      fault(e.what());
    }
  }
  m_flows[{sid, path.path_id}] = FlowRoute{path.hops, path.link_domains};
}

std::size_t
Simulator::open_unicast(std::string id, std::string kind, const L5Address& src,
                        const L5Address& dst, const std::string& tag,
                        std::shared_ptr<const std::vector<std::uint8_t>> content,
                        std::optional<Rational> cap)
{
  UnicastRec u;
  u.id = std::move(id);
  u.kind = std::move(kind);
  u.sid = m_next_sid++;
  u.src = src;
  u.dst = dst;
  u.tag = tag;
  u.weight = weight_of(tag);
  u.cap = std::move(cap);
  u.content = std::move(content);
  u.source_hash = digest(*u.content);
  u.opened_at = now();

  std::vector<L5Path> disjoint;
  try {
    disjoint = pathfinder::k_disjoint_paths(graph_for(src), src, dst, m_config.k_paths);
  }
  catch (const Error& e) {
    fault(e.what());
  }
  for (const auto& p : disjoint) {
    if (auto r = l3_route(p)) {
      u.potential += m_l3.min_capacity(*r);
      u.residual += m_l3.min_available(*r);
    }
  }

  auto direct = direct_path(src, dst);
  if (m_config.mode == scenario::Mode::Baseline && direct) {
    u.routing = "direct-l3";
    u.paths = {*direct};
  }
  else {
    u.routing = "l5";
    if (m_config.mode == scenario::Mode::Baseline && disjoint.size() > 1)
      disjoint.resize(1);
    u.paths = disjoint;
  }
  if (disjoint.empty() && direct) {
    if (auto r = m_l3.route(*port_of(src, direct->link_domains[0]),
                            *port_of(dst, direct->link_domains[0]))) {
      u.potential = m_l3.min_capacity(*r);
      u.residual = m_l3.min_available(*r);
    }
  }

  std::size_t ui = m_unicasts.size();
  if (u.paths.empty()) {
    fault("session " + u.id + ": no path from " + src.str() + " to " + dst.str());
    m_unicasts.push_back(std::move(u));
    return ui;
  }

  std::map<PathId, Rational> zero;
  std::map<PathId, L3Locator> reverse;
  for (const auto& p : u.paths) {
    install(u.sid, p);
    zero[p.path_id] = 0;
    reverse[p.path_id] = *port_of(p.hops[p.hops.size() - 2], p.link_domains.back());
  }

  auto tx = session::open_session(u.sid, src, dst, tag, u.paths, zero, m_resolver);
  tx.enqueue_stream(u.content);
  tx.close();
  u.sender = m_senders.size();
  m_senders.push_back(SenderRec{std::move(tx), src, Owner::Unicast, ui, 0, std::nullopt});
  u.receiver = m_receivers.size();
  m_receivers.push_back(
    ReceiverRec{session::SessionReceiver(u.sid, tag, reverse), dst, Owner::Unicast, ui});
  for (const auto& p : u.paths) {
    m_tx_at[{src, u.sid, p.path_id}] = u.sender;
    m_rx_at[{dst, u.sid, p.path_id}] = u.receiver;
  }
  m_unicasts.push_back(std::move(u));
  return ui;
}

void
Simulator::unicast_progress(std::size_t ui)
{
  auto& u = m_unicasts[ui];
  if (u.completed_at)
    return;
  const auto& rx = m_receivers[u.receiver].rx;
  if (rx.bytes_delivered() < u.content->size())
    return;
  u.completed_at = now();
  if (!u.subscription)
    return;
  auto& sub = m_subscriptions[*u.subscription];
  sub.stored_hash = wire::to_hex(rx.delivered_digest());
  if (rx.delivered_digest() == u.source_hash) {
    sub.replicated = true;
    m_resolver = gateway::store_replica(m_gateways.at(u.dst), m_resolver, u.object, u.content,
                                        u.object_ttl, now());
  }
}

void
Simulator::reallocate(const std::string& cause)
{
  allocator::CapacityMap caps;
  for (const auto& l : m_l3.links())
    if (l.up)
      caps[l.id] = l.available;

  allocator::DemandMatrix dm;
  std::vector<std::tuple<std::size_t, PathId>> owners;
  for (const auto& u : m_unicasts) {
    if (u.sender == none)
      continue;
    for (const auto& p : u.paths) {
      allocator::Demand d;
      d.id = u.id + "/p" + std::to_string(p.path_id);
      d.weight = u.weight;
      d.links = l3_links(p);
      if (u.cap)
        d.cap = *u.cap / Rational(static_cast<long long>(u.paths.size()));
      d.tag = u.tag;
      if (d.links.empty() && !d.cap)
        continue;
      dm.sessions.push_back(std::move(d));
      owners.emplace_back(u.sender, p.path_id);
    }
  }
  for (const auto& t : m_trees) {
    for (const auto& leg : t.legs) {
      allocator::Demand d;
      d.id = t.id + "/" + leg.edge.from.str() + ">" + leg.edge.to.str();
      d.weight = t.weight;
      L5Path p;
      p.hops = {leg.edge.from, leg.edge.to};
      p.link_domains = {leg.domain};
      d.links = l3_links(p);
      d.tag = t.tag;
      if (d.links.empty())
        continue;
      dm.sessions.push_back(std::move(d));
      owners.emplace_back(leg.sender, leg.pid);
    }
  }

  auto alloc = allocator::water_fill(caps, dm);

  std::map<std::size_t, std::map<PathId, Rational>> per_sender;
  for (const auto& u : m_unicasts)
    if (u.sender != none)
      for (const auto& p : u.paths)
        per_sender[u.sender][p.path_id] = 0;
  for (const auto& t : m_trees)
    for (const auto& leg : t.legs)
      per_sender[leg.sender][leg.pid] = 0;
  for (std::size_t i = 0; i < dm.sessions.size(); ++i) {
    auto [si, pid] = owners[i];
    per_sender[si][pid] = alloc.exact_rates.at(dm.sessions[i].id);
  }
  for (auto& [si, rates] : per_sender) {
    m_senders[si].tx.set_rates(rates, now());
    wake(si);
  }

  EpochReport e;
  e.index = static_cast<std::uint32_t>(m_epochs.size());
  e.cause = cause;
  e.rates = alloc.rates;
  try {
    e.domain_shares = allocator::domain_shares(alloc, dm, m_policy);
  }
  catch (const Error& err) {
    fault(err.what());
  }
  m_epochs.push_back(std::move(e));
}

void
Simulator::reroute()
{
  for (auto& u : m_unicasts) {
    if (u.sender == none || u.completed_at || u.routing != "l5")
      continue;
    std::vector<L5Path> fresh;
    try {
      fresh = pathfinder::k_disjoint_paths(
        graph_for(u.src), u.src, u.dst,
        m_config.mode == scenario::Mode::Baseline ? 1 : m_config.k_paths);
    }
    catch (const Error& e) {
      fault(e.what());
    }
    bool same = fresh.size() == u.paths.size();
    for (std::size_t i = 0; same && i < fresh.size(); ++i)
      same = fresh[i].hops == u.paths[i].hops && fresh[i].link_domains == u.paths[i].link_domains;
    if (same)
      continue;
    if (fresh.empty()) {
      fault("session " + u.id + " lost every path");
      continue;
    }
    PathId next = 0;
    for (const auto& p : u.paths)
      next = std::max(next, p.path_id + 1);
    for (const auto& p : u.retired)
      next = std::max(next, p.path_id + 1);
    std::map<PathId, Rational> zero;
    for (auto& p : fresh) {
      p.path_id = next++;
      install(u.sid, p);
      zero[p.path_id] = 0;
      m_receivers[u.receiver].rx.set_reverse_hop(
        p.path_id, *port_of(p.hops[p.hops.size() - 2], p.link_domains.back()));
      m_tx_at[{u.src, u.sid, p.path_id}] = u.sender;
      m_rx_at[{u.dst, u.sid, p.path_id}] = u.receiver;
    }
    m_senders[u.sender].tx.replace_paths(fresh, zero, m_resolver, now());
    u.retired.insert(u.retired.end(), u.paths.begin(), u.paths.end());
    u.paths = std::move(fresh);
    fault("session " + u.id + " rerouted onto " + std::to_string(u.paths.size()) + " path(s)");
  }
}

// --------------------------------------------------------------- trees

void
Simulator::add_leg(std::size_t ti, const pubsub::DeliveryEdge& edge)
{
  auto& t = m_trees[ti];
  const auto* ge = graph_for(t.tree.publisher).edge(edge.from, edge.to);
  LegRec leg;
  leg.edge = edge;
  leg.pid = static_cast<PathId>(t.legs.size());
  leg.domain = ge ? ge->domain_id : std::string{};

  L5Path path;
  path.hops = {edge.from, edge.to};
  path.link_domains = {leg.domain};
  path.path_id = leg.pid;
  if (ge) {
    path.metric_us = ge->latency_us;
    path.min_capacity_mbps = ge->capacity_mbps;
  }
  m_flows[{t.sid, leg.pid}] = FlowRoute{path.hops, path.link_domains};

  auto tx = session::open_session(t.sid, edge.from, edge.to, t.tag, {path}, {{leg.pid, 0}},
                                  m_resolver, session::SessionMode::PubSub);
  leg.sender = m_senders.size();
  m_senders.push_back(SenderRec{std::move(tx), edge.from, Owner::Leg, ti, 0, std::nullopt});
  leg.receiver = m_receivers.size();
  m_receivers.push_back(ReceiverRec{
    session::SessionReceiver(t.sid, t.tag, {{leg.pid, *port_of(edge.from, leg.domain)}}), edge.to,
    Owner::Leg, ti, t.legs.size()});
  m_tx_at[{edge.from, t.sid, leg.pid}] = leg.sender;
  m_rx_at[{edge.to, t.sid, leg.pid}] = leg.receiver;
  t.out_legs[edge.from].push_back(t.legs.size());
  t.in_leg[edge.to] = t.legs.size();
  t.legs.push_back(std::move(leg));
}

void
Simulator::publish(const scenario::Publish& p)
{
  auto publisher = parse_address(p.publisher);
  std::shared_ptr<const std::vector<std::uint8_t>> content;
  std::optional<L5Address> object;
  if (p.name) {
    object = data_name(*p.name);
    content = gateway::synthetic_content(*object, p.bytes);
  }
  else {
    content = std::make_shared<const std::vector<std::uint8_t>>(
      wire::synthetic_bytes(wire::fnv1a64(p.id), p.bytes));
  }

  if (m_config.mode == scenario::Mode::Baseline) {
    for (const auto& s : p.subscribers) {
      auto sub = parse_address(s);
      open_unicast(p.id + "/" + sub.str(), "fanout", publisher, sub, p.tag, content, std::nullopt);
    }
    reallocate("publish " + p.id);
    return;
  }

  std::set<L5Address> subs;
  for (const auto& s : p.subscribers)
    subs.insert(parse_address(s));
  TreeRec t;
  t.id = p.id;
  t.sid = m_next_sid++;
  t.tag = p.tag;
  t.weight = weight_of(p.tag);
  t.content = content;
  t.object = object;
  try {
    t.tree = pubsub::build_tree(graph_for(publisher), publisher, {}, m_costs);
  }
  catch (const Error& e) {
    fault("publish " + p.id + ": " + e.what());
    return;
  }
  std::size_t ti = m_trees.size();
  m_tree_by_id[t.id] = ti;
  m_trees.push_back(std::move(t));
  if (object)
    m_active_trees[*object] = ti;

  if (publisher != m_trees[ti].tree.root)
    add_leg(ti, {publisher, m_trees[ti].tree.root, pubsub::EdgeKind::AccessUp});
  for (const auto& sub : subs)
    join(ti, sub, std::nullopt);

  auto& tr = m_trees[ti];
  if (publisher != tr.tree.root) {
    m_senders[tr.legs[0].sender].tx.enqueue_stream(content);
    m_senders[tr.legs[0].sender].tx.close();
  }
  else {
    for (auto li : tr.out_legs[tr.tree.root]) {
      m_senders[tr.legs[li].sender].tx.enqueue_stream(content);
      m_senders[tr.legs[li].sender].tx.close();
    }
  }
  tr.started = true;
  reallocate("publish " + p.id);
}

void
Simulator::join(std::size_t ti, const L5Address& subscriber,
                std::optional<std::size_t> subscription)
{
  const auto& graph = graph_for(m_trees[ti].tree.publisher);
  std::vector<pubsub::TreeEdge> added;
  try {
    added = pubsub::graft(m_trees[ti].tree, graph, subscriber);
  }
  catch (const Error& e) {
    fault("join " + m_trees[ti].id + ": " + e.what());
    return;
  }
  auto& t = m_trees[ti];
  const L5Address anchor = t.tree.attachment.at(subscriber);
  // the node where the new branch leaves the existing tree
  L5Address attach = added.empty() ? anchor : added.front().parent;
  bool root_fed = attach == t.tree.root && t.tree.publisher == t.tree.root;
  std::uint64_t offset = 0;
  if (!root_fed && !(added.empty() && anchor == subscriber)) {
    auto in = t.in_leg.find(attach);
    if (in != t.in_leg.end())
      offset = m_receivers[t.legs[in->second].receiver].rx.next_expected();
  }

  std::vector<std::size_t> new_legs;
  for (const auto& e : added) {
    new_legs.push_back(m_trees[ti].legs.size());
    add_leg(ti, {e.parent, e.child, pubsub::EdgeKind::Tree});
  }
  if (anchor != subscriber && !m_trees[ti].in_leg.contains(subscriber)) {
    new_legs.push_back(m_trees[ti].legs.size());
    add_leg(ti, {anchor, subscriber, pubsub::EdgeKind::AccessDown});
  }
  auto& tr = m_trees[ti];

  // a root that is also the publisher feeds late legs the whole object
  if (root_fed && tr.started)
    for (auto li : new_legs)
      if (tr.legs[li].edge.from == tr.tree.root) {
        m_senders[tr.legs[li].sender].tx.enqueue_stream(tr.content);
        m_senders[tr.legs[li].sender].tx.close();
      }

  SubRec s;
  s.anchor = anchor;
  s.joined_at = now();
  s.offset = offset;
  auto skip = std::min<std::uint64_t>(offset * session::max_payload_bytes, tr.content->size());
  s.expected_bytes = tr.content->size() - skip;
  s.expected_hash =
    digest(std::span<const std::uint8_t>(tr.content->data() + skip, s.expected_bytes));
  s.subscription = subscription;
  if (auto in = tr.in_leg.find(subscriber); in != tr.in_leg.end())
    s.receiver = tr.legs[in->second].receiver;
  tr.subs[subscriber] = std::move(s);

  auto costs = m_costs;
  tr.tree_cost = to_double(pubsub::weighted_crossings(graph, pubsub::tree_link_uses(tr.tree), costs));
  tr.unicast_cost =
    to_double(pubsub::weighted_crossings(graph, pubsub::unicast_link_uses(tr.tree), costs));
  tree_progress(ti);
}

void
Simulator::relay(std::size_t ti, std::size_t leg, const std::vector<Segment>& delivered)
{
  auto& t = m_trees[ti];
  const L5Address node = t.legs[leg].edge.to;
  auto out = t.out_legs.find(node);
  if (out != t.out_legs.end() && !out->second.empty()) {
    for (const auto& seg : delivered) {
      for (auto li : out->second)
        m_senders[t.legs[li].sender].tx.enqueue(seg.payload);
      if (auto a = m_anchors.find(node); a != m_anchors.end())
        a->second.account(t.tag, seg.payload.size(), out->second.size());
    }
    for (auto li : out->second)
      wake(t.legs[li].sender);
  }
  tree_progress(ti);
}

void
Simulator::tree_progress(std::size_t ti)
{
  auto& t = m_trees[ti];
  bool all = true;
  for (auto& [name, s] : t.subs) {
    if (!s.complete) {
      std::uint64_t got = s.receiver == none ? 0 : m_receivers[s.receiver].rx.bytes_delivered();
      if (got >= s.expected_bytes) {
        s.complete = true;
        if (s.subscription && s.offset == 0 && m_gateways.contains(name)) {
          auto& sub = m_subscriptions[*s.subscription];
          auto h = s.receiver == none ? digest({}) : m_receivers[s.receiver].rx.delivered_digest();
          sub.stored_hash = wire::to_hex(h);
          if (h == s.expected_hash && t.object) {
            sub.replicated = true;
            m_resolver = gateway::store_replica(m_gateways.at(name), m_resolver, *t.object,
                                                t.content, t.object_ttl, now());
          }
        }
      }
    }
    all = all && s.complete;
  }
  if (all && !t.subs.empty() && !t.complete) {
    t.complete = true;
    if (t.object)
      m_active_trees.erase(*t.object);
  }
}

// ------------------------------------------------------------ scenario

void
Simulator::schedule_sweep()
{
  if (m_sweep_scheduled)
    return;
  m_sweep_scheduled = true;
  push((now() / sweep_period_us + 1) * sweep_period_us, Sweep{});
}

void
Simulator::on_sweep()
{
  m_sweep_scheduled = false;
  std::size_t entries = 0;
  for (auto& [name, gw] : m_gateways) {
    gw.catalog.sweep(now());
    entries += gw.catalog.size();
  }
  // keep sweeping while anything else is still going on
  if (entries > 0 && !m_queue.empty())
    schedule_sweep();
}

void
Simulator::on_action(std::size_t index)
{
  const auto& ev = m_config.events[index];
  std::visit(
    [&](const auto& a) {
      using T = std::decay_t<decltype(a)>;
      if constexpr (std::is_same_v<T, scenario::OpenSession>) {
        auto content = std::make_shared<const std::vector<std::uint8_t>>(
          wire::synthetic_bytes(wire::fnv1a64(a.id), a.bytes));
        std::optional<Rational> cap;
        if (a.demand_cap_mbps)
          cap = rational_from_decimal(*a.demand_cap_mbps);
        open_unicast(a.id, "unicast", parse_address(a.src), parse_address(a.dst), a.tag, content,
                     cap);
        reallocate("open_session " + a.id);
      }
      else if constexpr (std::is_same_v<T, scenario::Publish>) {
        publish(a);
      }
      else if constexpr (std::is_same_v<T, scenario::Join>) {
        auto sub = parse_address(a.subscriber);
        auto it = m_tree_by_id.find(a.tree);
        if (it != m_tree_by_id.end()) {
          join(it->second, sub, std::nullopt);
          reallocate("join " + a.tree);
          return;
        }
        // baseline runs have no trees: serve the late subscriber by unicast
        for (const auto& e : m_config.events) {
          const auto* p = std::get_if<scenario::Publish>(&e.action);
          if (!p || p->id != a.tree)
            continue;
          auto pub = parse_address(p->publisher);
          auto content =
            p->name ? gateway::synthetic_content(data_name(*p->name), p->bytes)
                    : std::make_shared<const std::vector<std::uint8_t>>(
                        wire::synthetic_bytes(wire::fnv1a64(p->id), p->bytes));
          open_unicast(p->id + "/" + sub.str(), "fanout", pub, sub, p->tag, content, std::nullopt);
          reallocate("join " + a.tree);
          return;
        }
        fault("join: no tree '" + a.tree + "'");
      }
      else if constexpr (std::is_same_v<T, scenario::Stage>) {
        auto gw = parse_address(a.gateway);
        m_resolver = gateway::stage_object(m_gateways.at(gw), m_resolver, data_name(a.name),
                                           a.bytes, a.ttl_us, now());
        schedule_sweep();
      }
      else if constexpr (std::is_same_v<T, scenario::Subscribe>) {
        auto requester = parse_address(a.requester);
        auto name = data_name(a.name);
        SubscriptionReport rep;
        rep.requester = requester.str();
        rep.name = name.str();
        rep.at_us = now();
        std::size_t si = m_subscriptions.size();
        try {
          auto plan = gateway::plan_subscription(requester, name, now(), m_resolver,
                                                 graph_for(requester), m_gateways, m_active_trees);
          if (auto* hit = std::get_if<gateway::LocalHit>(&plan)) {
            rep.outcome = "local";
            rep.source = requester.str();
            rep.source_hash = rep.stored_hash = wire::to_hex(hit->object.content_hash);
            rep.replicated = true;
            m_subscriptions.push_back(std::move(rep));
          }
          else if (auto* jt = std::get_if<gateway::JoinTree>(&plan)) {
            auto& t = m_trees[jt->tree];
            rep.outcome = "join";
            rep.source = t.tree.publisher.str();
            rep.source_hash = wire::to_hex(digest(*t.content));
            m_subscriptions.push_back(std::move(rep));
            join(jt->tree, requester, si);
            reallocate("subscribe " + name.str());
          }
          else {
            const auto& from = std::get<gateway::UnicastFrom>(plan);
            auto obj = m_gateways.at(from.source).catalog.lookup(name, now());
            rep.outcome = "unicast";
            rep.source = from.source.str();
            rep.source_hash = wire::to_hex(obj->content_hash);
            m_subscriptions.push_back(std::move(rep));
            std::string id = "fetch:" + name.str() + "@" + requester.str();
            for (int n = 2; std::any_of(m_unicasts.begin(), m_unicasts.end(),
                                        [&](const auto& u) { return u.id == id; });
                 ++n)
              id = "fetch:" + name.str() + "@" + requester.str() + "#" + std::to_string(n);
            auto ui = open_unicast(id, "fetch", from.source, requester, a.tag, obj->content,
                                   std::nullopt);
            m_unicasts[ui].subscription = si;
            m_unicasts[ui].object = name;
            m_unicasts[ui].object_ttl = obj->ttl;
            reallocate("subscribe " + name.str());
          }
        }
        catch (const Error& e) {
          rep.outcome = "unavailable";
          m_subscriptions.push_back(std::move(rep));
          fault(e.what());
        }
      }
      else {
        auto li = m_l3.find_link(a.link);
        m_l3.set_down(*li);
        fault("link " + a.link + " down");
        refresh_adjacencies();
      }
    },
    ev.action);
}

// ------------------------------------------------------------- running

void
Simulator::trace(const EventQueue<Payload>::Entry& e)
{
  auto& w = m_trace_writer;
  w.u64(e.time);
  w.u64(e.tiebreak);
  w.u8(static_cast<std::uint8_t>(e.payload.index()));
  std::visit(
    [&](const auto& p) {
      using T = std::decay_t<decltype(p)>;
      if constexpr (std::is_same_v<T, Transit>) {
        w.u32(static_cast<std::uint32_t>(p.route[p.index]));
        session::encode(w, p.segment);
      }
      else if constexpr (std::is_same_v<T, Deliver>) {
        session::encode(w, p.segment);
      }
      else if constexpr (std::is_same_v<T, Wake>) {
        w.u64(p.sender);
      }
      else if constexpr (std::is_same_v<T, LsaDelivery>) {
        w.str(p.to.str());
        topology::encode(w, p.lsa);
      }
      else if constexpr (std::is_same_v<T, ScenarioAction>) {
        w.u64(p.event);
      }
    },
    e.payload);
}

RunResult
Simulator::run()
{
  build_nodes();
  for (auto& [name, st] : m_anchors)
    st.link_state().adjacencies = compute_adjacencies(name);
  std::size_t peer_links = 0;
  for (const auto& [name, st] : m_anchors)
    for (const auto& adj : st.link_state().adjacencies)
      if (m_anchors.contains(adj.neighbor) && name < adj.neighbor)
        ++peer_links;
  m_topo.peer_links = peer_links;
  for (const auto& [name, st] : m_anchors)
    originate(name);
  if (m_lsa_in_flight == 0)
    on_quiescence();

  bool horizon_hit = false;
  try {
    while (!m_queue.empty()) {
      if (m_config.horizon_us && m_queue.top().time > m_config.horizon_us) {
        horizon_hit = true;
        break;
      }
      auto e = m_queue.pop();
      ++m_events;
      trace(e);
      std::visit(
        [&](auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Transit>)
            on_transit(p);
          else if constexpr (std::is_same_v<T, Deliver>)
            deliver(p.segment);
          else if constexpr (std::is_same_v<T, Wake>)
            on_wake(p);
          else if constexpr (std::is_same_v<T, LsaDelivery>)
            on_lsa(p);
          else if constexpr (std::is_same_v<T, ScenarioAction>)
            on_action(p.event);
          else
            on_sweep();
        },
        e.payload);
    }
  }
  catch (const Error& e) {
    if (e.code() != ErrorCode::CausalityViolation)
      throw;
    ++m_faults.causality_violations;
    fault(e.what());
  }
  auto result = report();
  result.horizon_reached = horizon_hit;
  return result;
}

RunResult
Simulator::report()
{
  RunResult r;
  r.scenario = m_config.name;
  r.scenario_hash = wire::to_hex(scenario::scenario_hash(m_config));
  r.topology_hash = wire::to_hex(scenario::topology_hash(m_config));
  r.seed = m_config.seed;
  r.mode = std::string(scenario::to_string(m_config.mode));
  r.trace_hash = wire::to_hex(m_trace.digest());
  r.events = m_events;
  r.end_time_us = now();

  auto hops_of = [](const std::vector<L5Address>& hops) {
    std::vector<std::string> out;
    for (const auto& h : hops)
      out.push_back(h.str());
    return out;
  };
  auto links_of = [&](const L5Path& p) {
    std::vector<std::string> out;
    if (auto route = l3_route(p))
      for (auto l : *route)
        out.push_back(m_l3.link(l).id);
    return out;
  };

  Summary& sum = r.summary;
  for (const auto& u : m_unicasts) {
    SessionReport s;
    s.id = u.id;
    s.session_id = u.sid;
    s.kind = u.kind;
    s.routing = u.routing;
    s.src = u.src.str();
    s.dst = u.dst.str();
    s.tag = u.tag;
    s.bytes = u.content->size();
    s.source_hash = wire::to_hex(u.source_hash);
    s.opened_at_us = u.opened_at;
    s.potential_mbps = to_double(u.potential);
    s.residual_potential_mbps = to_double(u.residual);
    s.delivered_hash = wire::to_hex(digest({}));
    if (u.receiver != none) {
      const auto& rx = m_receivers[u.receiver].rx;
      s.delivered_bytes = rx.bytes_delivered();
      s.delivered_hash = wire::to_hex(rx.delivered_digest());
      s.duplicates = rx.duplicates();
      auto last = rx.last_delivery();
      if (last && *last > u.opened_at)
        s.throughput_mbps =
          static_cast<double>(s.delivered_bytes * 8) / static_cast<double>(*last - u.opened_at);
    }
    s.hash_match = s.delivered_bytes == s.bytes && s.delivered_hash == s.source_hash;
    s.complete = u.sender != none && m_senders[u.sender].tx.complete();
    s.completed_at_us = u.completed_at;
    auto add_path = [&](const L5Path& p, bool retired) {
      const auto& tx = m_senders[u.sender].tx;
      PathReport pr;
      pr.path_id = p.path_id;
      pr.hops = hops_of(p.hops);
      pr.l3_links = links_of(p);
      pr.metric_us = p.metric_us;
      pr.rate_mbps = to_double(tx.rate(p.path_id));
      const auto& st = tx.path_stats(p.path_id);
      pr.segments = st.segments;
      pr.retransmits = st.retransmits;
      pr.bytes = st.bytes;
      pr.rate_compliance = tx.rate_compliance(p.path_id);
      pr.retired = retired;
      s.paths.push_back(std::move(pr));
    };
    if (u.sender != none) {
      for (const auto& p : u.retired)
        add_path(p, true);
      for (const auto& p : u.paths)
        add_path(p, false);
    }
    if (u.kind == "unicast") {
      sum.throughput_mbps += s.throughput_mbps;
      sum.potential_mbps += s.potential_mbps;
      sum.residual_potential_mbps += s.residual_potential_mbps;
    }
    r.sessions.push_back(std::move(s));
  }
  if (sum.potential_mbps > 0)
    sum.potential_fraction = sum.throughput_mbps / sum.potential_mbps;
  if (sum.residual_potential_mbps > 0)
    sum.residual_fraction = sum.throughput_mbps / sum.residual_potential_mbps;
  sum.headline_fraction =
    m_config.mode == scenario::Mode::Baseline ? sum.potential_fraction : sum.residual_fraction;

  r.allocations = m_epochs;

  Micros span = now() > m_topo.discovery_done_us ? now() - m_topo.discovery_done_us : 0;
  for (std::size_t i = 0; i < m_l3.links().size(); ++i) {
    const auto& l = m_l3.link(i);
    const auto& st = m_link_stats[i];
    LinkReport lr;
    lr.id = l.id;
    lr.domain = l.domain;
    lr.a = l.a;
    lr.b = l.b;
    lr.capacity_mbps = to_double(l.capacity);
    lr.available_mbps = to_double(l.available);
    lr.cost = to_double(l.cost);
    lr.up = l.up;
    lr.transmitted = st.transmitted;
    lr.delivered = st.delivered;
    lr.dropped = st.dropped;
    lr.in_flight = st.in_flight;
    lr.original_data = st.original;
    lr.retransmitted_data = st.retransmitted;
    lr.acks = st.acks;
    lr.bytes = st.bytes;
    if (span > 0)
      lr.utilization =
        static_cast<double>(st.bytes * 8) / (lr.available_mbps * static_cast<double>(span));
    r.links.push_back(std::move(lr));
  }

  for (const auto& t : m_trees) {
    TreeReport tr;
    tr.id = t.id;
    tr.publisher = t.tree.publisher.str();
    tr.root = t.tree.root.str();
    tr.tag = t.tag;
    if (t.object)
      tr.object = t.object->str();
    tr.bytes = t.content->size();
    tr.payload_segments =
      (tr.bytes + session::max_payload_bytes - 1) / session::max_payload_bytes;
    for (const auto& e : t.tree.edges)
      tr.edges.emplace_back(e.parent.str(), e.child.str());
    for (const auto& leg : t.legs) {
      TreeEdgeReport er;
      er.from = leg.edge.from.str();
      er.to = leg.edge.to.str();
      er.kind = leg.edge.kind == pubsub::EdgeKind::AccessUp
                  ? "access_up"
                  : (leg.edge.kind == pubsub::EdgeKind::Tree ? "tree" : "access_down");
      L5Path p;
      p.hops = {leg.edge.from, leg.edge.to};
      p.link_domains = {leg.domain};
      er.l3_links = links_of(p);
      const auto& tx = m_senders[leg.sender].tx;
      er.rate_mbps = to_double(tx.rate(leg.pid));
      const auto& st = tx.path_stats(leg.pid);
      er.segments = st.segments;
      er.retransmits = st.retransmits;
      er.original_segments = st.segments - st.retransmits;
      er.rate_compliance = tx.rate_compliance(leg.pid);
      tr.legs.push_back(std::move(er));
    }
    for (const auto& [name, s] : t.subs) {
      SubscriberReport sr;
      sr.name = name.str();
      sr.anchor = s.anchor.str();
      sr.joined_at_us = s.joined_at;
      sr.offset_segments = s.offset;
      sr.expected_bytes = s.expected_bytes;
      sr.expected_hash = wire::to_hex(s.expected_hash);
      sr.delivered_hash = wire::to_hex(digest({}));
      if (s.receiver != none) {
        const auto& rx = m_receivers[s.receiver].rx;
        sr.delivered_bytes = rx.bytes_delivered();
        sr.delivered_hash = wire::to_hex(rx.delivered_digest());
      }
      sr.complete = s.complete;
      sr.hash_match = sr.delivered_bytes == sr.expected_bytes && sr.delivered_hash == sr.expected_hash;
      tr.subscribers.push_back(std::move(sr));
    }
    tr.tree_cost = t.tree_cost;
    tr.unicast_cost = t.unicast_cost;
    tr.complete = t.complete;
    r.trees.push_back(std::move(tr));
  }

  for (const auto& [name, st] : m_anchors) {
    r.per_anchor_tags[name.str()] = st.tag_report();
    m_faults.dropped_unknown += st.dropped_unknown();
    m_faults.misaddressed += st.misaddressed();
  }

  m_topo.max_transmissions_per_origination = 0;
  for (const auto& [key, n] : m_per_origination)
    m_topo.max_transmissions_per_origination =
      std::max(m_topo.max_transmissions_per_origination, n);
  m_topo.database_hashes.clear();
  bool same = true;
  std::optional<std::uint64_t> first;
  for (const auto& [name, st] : m_anchors) {
    auto d = st.topo().digest();
    m_topo.database_hashes[name.str()] = wire::to_hex(d);
    if (first && *first != d)
      same = false;
    first = d;
  }
  m_topo.converged_at_end = same;
  r.topology = m_topo;

  for (const auto& [name, gw] : m_gateways) {
    GatewayReport g;
    g.name = name.str();
    for (const auto& [obj, entry] : gw.catalog.entries())
      g.catalog.push_back({obj.str(), entry.size, entry.staged_at, entry.ttl,
                           wire::to_hex(entry.content_hash)});
    r.gateways.push_back(std::move(g));
  }
  r.subscriptions = m_subscriptions;
  r.faults = m_faults;
  return r;
}

}  // namespace

RunResult
run_scenario(const scenario::ScenarioConfig& config)
{
  Simulator sim(config);
  return sim.run();
}

}  // namespace l5::simnet
