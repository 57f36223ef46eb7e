#pragma once

// Random instance generators and slow reference implementations used as
// test oracles. Nothing here calls into the code under test except to build
// its inputs.

#include "l5/allocator.hpp"
#include "l5/pathfinder.hpp"
#include "l5/session.hpp"
#include "l5/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace l5::oracle {

inline std::uint64_t
uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi)
{
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

// ------------------------------------------------------------------ graphs

struct GraphSpec {
  struct Edge {
    std::string a, b;
    std::uint64_t latency = 1;
    double capacity = 100;
  };
  std::vector<std::string> anchors;
  std::map<std::string, std::string> hosts;  ///< host -> its anchor
  std::map<std::string, std::uint64_t> host_latency;
  std::vector<Edge> edges;  ///< anchor-anchor, undirected

  std::vector<std::string> nodes() const
  {
    std::vector<std::string> out = anchors;
    for (const auto& [h, a] : hosts)
      out.push_back(h);
    return out;
  }
};

/// Anchors a0..a(n-1), optionally a spanning tree first, then extra edges;
/// small latencies so that equal-metric ties are common.
inline GraphSpec
random_graph(std::mt19937_64& rng, std::size_t anchors, std::size_t hosts, std::size_t extra_edges,
             bool connected, std::uint64_t max_latency = 4)
{
  GraphSpec g;
  for (std::size_t i = 0; i < anchors; ++i)
    g.anchors.push_back("a" + std::to_string(i));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b)
      return;
    auto key = std::minmax(a, b);
    if (!seen.insert(key).second)
      return;
    g.edges.push_back({g.anchors[key.first], g.anchors[key.second], uniform(rng, 1, max_latency),
                       static_cast<double>(uniform(rng, 1, 10) * 10)});
  };
  if (connected)
    for (std::size_t i = 1; i < anchors; ++i)
      add(uniform(rng, 0, i - 1), i);
  for (std::size_t e = 0; e < extra_edges && anchors > 1; ++e)
    add(uniform(rng, 0, anchors - 1), uniform(rng, 0, anchors - 1));
  for (std::size_t h = 0; h < hosts && anchors > 0; ++h) {
    auto name = "h" + std::to_string(h);
    g.hosts[name] = g.anchors[uniform(rng, 0, anchors - 1)];
    g.host_latency[name] = uniform(rng, 1, max_latency);
  }
  return g;
}

inline std::map<L5Address, topology::FloodNode>
flood_network(const GraphSpec& g)
{
  std::map<L5Address, topology::FloodNode> net;
  for (const auto& a : g.anchors) {
    auto name = parse_address(a);
    net[name].state.self = name;
  }
  for (const auto& e : g.edges) {
    auto a = parse_address(e.a);
    auto b = parse_address(e.b);
    net[a].state.adjacencies.push_back({b, e.capacity, e.latency, "d"});
    net[b].state.adjacencies.push_back({a, e.capacity, e.latency, "d"});
    net[a].peers.push_back(b);
    net[b].peers.push_back(a);
  }
  for (const auto& [h, a] : g.hosts)
    net[parse_address(a)].state.adjacencies.push_back(
      {parse_address(h), 1000, g.host_latency.at(h), "d"});
  for (auto& [name, node] : net)
    std::sort(node.state.adjacencies.begin(), node.state.adjacencies.end(),
              [](const auto& x, const auto& y) { return x.neighbor < y.neighbor; });
  return net;
}

/// A database holding one advertisement per anchor.
inline topology::TopologyDatabase
database_of(const GraphSpec& g)
{
  topology::TopologyDatabase db;
  for (auto& [name, node] : flood_network(g)) {
    auto state = node.state;
    db.install(topology::originate_lsa(state));
  }
  return db;
}

// ------------------------------------------------------------- pathfinder

struct OraclePath {
  std::uint64_t metric = 0;
  std::vector<std::string> hops;
};

/// Every simple src→dst path whose interior nodes are anchors, sorted by
/// (metric, hop names), then picked greedily so that no two share an
/// anchor-anchor link. A picked path with no anchor-anchor link ends the
/// selection, since nothing can be disjoint from it.
inline std::vector<OraclePath>
enumerate_disjoint(const GraphSpec& g, const std::string& src, const std::string& dst,
                   std::size_t k)
{
  std::set<std::string> anchors(g.anchors.begin(), g.anchors.end());
  std::map<std::string, std::vector<std::pair<std::string, std::uint64_t>>> adj;
  for (const auto& e : g.edges) {
    adj[e.a].push_back({e.b, e.latency});
    adj[e.b].push_back({e.a, e.latency});
  }
  for (const auto& [h, a] : g.hosts) {
    adj[a].push_back({h, g.host_latency.at(h)});
    adj[h].push_back({a, g.host_latency.at(h)});
  }

  std::vector<OraclePath> all;
  std::vector<std::string> stack{src};
  std::set<std::string> on_stack{src};
  std::function<void(std::uint64_t)> dfs = [&](std::uint64_t metric) {
    const auto& at = stack.back();
    if (at == dst) {
      all.push_back({metric, stack});
      return;
    }
    if (at != src && !anchors.contains(at))
      return;
    for (const auto& [to, lat] : adj[at]) {
      if (on_stack.contains(to))
        continue;
      stack.push_back(to);
      on_stack.insert(to);
      dfs(metric + lat);
      on_stack.erase(to);
      stack.pop_back();
    }
  };
  if (src != dst)
    dfs(0);
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    return std::tie(x.metric, x.hops) < std::tie(y.metric, y.hops);
  });

  auto links_of = [&](const OraclePath& p) {
    std::set<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i + 1 < p.hops.size(); ++i)
      if (anchors.contains(p.hops[i]) && anchors.contains(p.hops[i + 1]))
        out.insert(std::minmax(p.hops[i], p.hops[i + 1]));
    return out;
  };
  std::vector<OraclePath> picked;
  std::set<std::pair<std::string, std::string>> used;
  for (const auto& p : all) {
    if (picked.size() == k)
      break;
    auto links = links_of(p);
    bool clash = std::any_of(links.begin(), links.end(), [&](const auto& l) { return used.contains(l); });
    if (clash)
      continue;
    picked.push_back(p);
    if (links.empty())
      break;
    used.insert(links.begin(), links.end());
  }
  return picked;
}

// ---------------------------------------------------------------- flooding

/// Flood transmissions of one origination: every anchor in the origin's
/// component forwards to all of its peers except the one it heard from.
inline std::uint64_t
expected_flood_transmissions(const GraphSpec& g, const std::string& origin)
{
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& e : g.edges) {
    adj[e.a].insert(e.b);
    adj[e.b].insert(e.a);
  }
  std::set<std::string> seen{origin};
  std::deque<std::string> q{origin};
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (const auto& w : adj[v])
      if (seen.insert(w).second)
        q.push_back(w);
  }
  std::uint64_t degree_sum = 0;
  for (const auto& v : seen)
    degree_sum += adj[v].size();
  return degree_sum - (seen.size() - 1);
}

// ---------------------------------------------------------------- allocator

struct FillInstance {
  allocator::CapacityMap capacities;
  allocator::DemandMatrix demands;
};

inline FillInstance
random_fill_instance(std::mt19937_64& rng, std::size_t max_links = 8, std::size_t max_sessions = 6,
                     bool with_caps = false)
{
  FillInstance inst;
  std::size_t links = uniform(rng, 1, max_links);
  std::size_t sessions = uniform(rng, 1, max_sessions);
  std::vector<std::string> ids;
  for (std::size_t l = 0; l < links; ++l) {
    ids.push_back("l" + std::to_string(l));
    inst.capacities[ids.back()] = Rational(static_cast<long long>(uniform(rng, 1, 100)));
  }
  for (std::size_t s = 0; s < sessions; ++s) {
    allocator::Demand d;
    d.id = "s" + std::to_string(s);
    d.weight = Rational(static_cast<long long>(uniform(rng, 1, 3)));
    std::size_t n = uniform(rng, 1, std::min<std::size_t>(links, 3));
    while (d.links.size() < n)
      d.links.insert(ids[uniform(rng, 0, links - 1)]);
    if (with_caps && uniform(rng, 0, 2) == 0)
      d.cap = Rational(static_cast<long long>(uniform(rng, 1, 60)));
    d.tag = uniform(rng, 0, 1) ? "atlas" : "cms";
    inst.demands.sessions.push_back(std::move(d));
  }
  return inst;
}

/// Progressive filling in floating point where each round finds the water
/// level by bisection instead of by solving for it.
inline std::map<std::string, double>
bisection_water_fill(const FillInstance& inst)
{
  const auto& ss = inst.demands.sessions;
  std::map<std::string, double> cap;
  for (const auto& [l, c] : inst.capacities)
    cap[l] = to_double(c);
  std::vector<double> w, limit, rate(ss.size(), 0);
  for (const auto& s : ss) {
    w.push_back(to_double(s.weight));
    limit.push_back(s.cap ? to_double(*s.cap) : INFINITY);
  }
  std::vector<bool> frozen(ss.size(), false);
  std::vector<double> base(ss.size(), 0);

  auto load = [&](const std::string& link, double level) {
    double sum = 0;
    for (std::size_t i = 0; i < ss.size(); ++i)
      if (ss[i].links.contains(link))
        sum += frozen[i] ? rate[i] : std::min(limit[i], w[i] * level);
    return sum;
  };
  auto feasible = [&](double level) {
    for (const auto& [l, c] : cap)
      if (load(l, level) > c * (1 + 1e-15) + 1e-15)
        return false;
    return true;
  };

  while (std::find(frozen.begin(), frozen.end(), false) != frozen.end()) {
    double lo = 0, hi = 1;
    for (std::size_t i = 0; i < ss.size(); ++i)
      if (!frozen[i])
        lo = std::max(lo, rate[i] / w[i]);
    hi = lo + 1;
    while (feasible(hi) && hi < 1e9)
      hi *= 2;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
    double level = lo;
    double probe = level * (1 + 1e-9) + 1e-9;
    bool any = false;
    for (std::size_t i = 0; i < ss.size(); ++i) {
      if (frozen[i])
        continue;
      bool stop = w[i] * probe >= limit[i];
      for (const auto& l : ss[i].links)
        if (load(l, probe) > cap.at(l))
          stop = true;
      if (stop) {
        rate[i] = std::min(limit[i], w[i] * level);
        frozen[i] = true;
        any = true;
      }
    }
    if (!any)
      break;  // unbounded; cannot happen when every session crosses a link
  }
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < ss.size(); ++i)
    out[ss[i].id] = rate[i];
  return out;
}

/// Empty string when `rates` is feasible and weighted max-min fair: every
/// session is at its cap or crosses a saturated link on which its
/// normalised rate is the largest.
inline std::string
max_min_violation(const FillInstance& inst, const std::map<std::string, double>& rates,
                  double tol = 1e-9)
{
  const auto& ss = inst.demands.sessions;
  std::map<std::string, double> load;
  for (const auto& s : ss)
    for (const auto& l : s.links)
      load[l] += rates.at(s.id);
  for (const auto& [l, sum] : load)
    if (sum > to_double(inst.capacities.at(l)) + tol)
      return "link " + l + " over capacity";
  for (const auto& s : ss) {
    double r = rates.at(s.id);
    if (r < -tol)
      return "negative rate for " + s.id;
    if (s.cap && r > to_double(*s.cap) + tol)
      return s.id + " exceeds its cap";
    if (s.cap && r >= to_double(*s.cap) - tol)
      continue;
    double norm = r / to_double(s.weight);
    bool ok = false;
    for (const auto& l : s.links) {
      if (load[l] < to_double(inst.capacities.at(l)) - tol)
        continue;
      bool top = true;
      for (const auto& o : ss)
        if (o.links.contains(l) && rates.at(o.id) / to_double(o.weight) > norm + tol)
          top = false;
      if (top)
        ok = true;
    }
    if (!ok)
      return s.id + " has no bottleneck link";
  }
  return {};
}

// ----------------------------------------------------------------- session

/// Drives one sender and one receiver over independent per-path pipes with
/// fixed latency and Bernoulli loss, recording every emission.
struct Loopback {
  struct Pipe {
    std::uint64_t latency_us = 0;
    double loss = 0;
  };
  struct Emission {
    session::PathId path;
    std::uint64_t time;
    std::size_t bytes;
    bool retransmit;
  };

  std::map<session::PathId, Pipe> pipes;
  std::uint64_t seed = 1;
  std::uint64_t horizon_us = 600'000'000;
  std::vector<Emission> emissions;
  std::uint64_t end_time = 0;

  void run(session::SessionSender& tx, session::SessionReceiver& rx)
  {
    std::mt19937_64 rng(seed);
    auto lost = [&](double p) {
      return p > 0 && static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
    };
    using Item = std::tuple<std::uint64_t, std::uint64_t, int, session::Segment>;
    auto later = [](const Item& a, const Item& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) > std::tie(std::get<0>(b), std::get<1>(b));
    };
    std::priority_queue<Item, std::vector<Item>, decltype(later)> q(later);
    std::uint64_t counter = 0;
    std::uint64_t now = 0;
    // kind 0: wake the sender, 1: data at receiver, 2: ack at sender
    q.push({0, counter++, 0, {}});
    std::uint64_t wake_at = 0;
    auto rewake = [&] {
      auto t = tx.next_wakeup(now);
      if (t && (*t < wake_at || wake_at <= now)) {
        wake_at = *t;
        q.push({*t, counter++, 0, {}});
      }
    };
    while (!q.empty()) {
      auto [t, c, kind, seg] = q.top();
      q.pop();
      if (t > horizon_us)
        break;
      now = t;
      if (kind == 0) {
        if (t != wake_at)
          continue;
        for (auto& s : tx.schedule(now)) {
          emissions.push_back({s.segment.path_id, s.emit_time, s.segment.payload.size(),
                               s.segment.is_retransmit});
          const auto& pipe = pipes.at(s.segment.path_id);
          if (!lost(pipe.loss))
            q.push({now + pipe.latency_us, counter++, 1, std::move(s.segment)});
        }
        wake_at = 0;
        rewake();
      }
      else if (kind == 1) {
        auto res = rx.on_receive(seg, now);
        for (auto& a : res.acks) {
          const auto& pipe = pipes.at(a.path_id);
          if (!lost(pipe.loss))
            q.push({now + pipe.latency_us, counter++, 2, std::move(a)});
        }
      }
      else {
        tx.on_ack(seg, now);
        rewake();
      }
      end_time = now;
      if (tx.complete() && rx.bytes_delivered() == tx.bytes_enqueued())
        break;
    }
  }

  /// Largest bits emitted on `path` in any window relative to rate x window,
  /// with one segment of burst allowance (a token bucket of depth one
  /// segment). Returns max over windows of bits / (rate*dt + segment bits).
  double bucket_excess(session::PathId path, double rate_mbps) const
  {
    std::vector<const Emission*> e;
    for (const auto& x : emissions)
      if (x.path == path)
        e.push_back(&x);
    double worst = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      double bits = 0;
      for (std::size_t j = i; j < e.size(); ++j) {
        bits += static_cast<double>(e[j]->bytes * 8);
        double dt = static_cast<double>(e[j]->time - e[i]->time);
        double allowance = rate_mbps * (dt + 1) + static_cast<double>(session::max_payload_bytes * 8);
        worst = std::max(worst, bits / allowance);
      }
    }
    return worst;
  }

  /// Emitted bits over [first emission, last emission + its pacing slot].
  double measured_mbps(session::PathId path, double rate_mbps) const
  {
    std::uint64_t first = UINT64_MAX, last = 0, bits = 0, last_bytes = 0;
    for (const auto& x : emissions) {
      if (x.path != path)
        continue;
      first = std::min(first, x.time);
      if (x.time >= last) {
        last = x.time;
        last_bytes = x.bytes;
      }
      bits += x.bytes * 8;
    }
    if (bits == 0)
      return 0;
    double span = static_cast<double>(last - first) + static_cast<double>(last_bytes * 8) / rate_mbps;
    return static_cast<double>(bits) / span;
  }
};

}  // namespace l5::oracle
