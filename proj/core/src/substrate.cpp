#include "l5/substrate.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace l5::simnet {

Substrate::Substrate(const scenario::ScenarioConfig& config)
{
  for (const auto& d : config.domains)
    for (const auto& att : d.attachments)
      m_adjacency[d.id][att];
  for (const auto& l : config.links) {
    SimLink s;
    s.id = l.id;
    s.domain = l.domain;
    s.a = l.a;
    s.b = l.b;
    s.capacity = rational_from_decimal(l.capacity_mbps);
    s.available = s.capacity * (Rational(1) - rational_from_decimal(l.background_utilization));
    s.latency_us = l.latency_us;
    s.loss_prob = l.loss_prob;
    s.cost = l.cost ? rational_from_decimal(*l.cost) : Rational(l.latency_us);
    m_index[s.id] = m_links.size();
    m_adjacency[s.domain][s.a].push_back({s.b, m_links.size()});
    m_adjacency[s.domain][s.b].push_back({s.a, m_links.size()});
    m_links.push_back(std::move(s));
  }
  for (auto& [dom, atts] : m_adjacency)
    for (auto& [att, nbrs] : atts)
      std::sort(nbrs.begin(), nbrs.end(), [](const Neighbor& x, const Neighbor& y) {
        return std::tie(x.attachment, x.link) < std::tie(y.attachment, y.link);
      });
}

std::optional<std::size_t>
Substrate::find_link(const std::string& id) const
{
  auto it = m_index.find(id);
  if (it == m_index.end())
    return std::nullopt;
  return it->second;
}

std::optional<Route>
Substrate::compute(const std::string& domain, const std::string& from, const std::string& to) const
{
  auto dom = m_adjacency.find(domain);
  if (dom == m_adjacency.end() || !dom->second.contains(from) || !dom->second.contains(to))
    return std::nullopt;

  struct Label {
    std::uint64_t latency;
    std::vector<std::string> atts;
    Route links;
    bool operator>(const Label& o) const
    {
      return std::tie(latency, atts) > std::tie(o.latency, o.atts);
    }
  };
  std::priority_queue<Label, std::vector<Label>, std::greater<>> frontier;
  std::set<std::string> settled;
  frontier.push({0, {from}, {}});
  while (!frontier.empty()) {
    Label l = frontier.top();
    frontier.pop();
    const auto& at = l.atts.back();
    if (!settled.insert(at).second)
      continue;
    if (at == to)
      return l.links;
    for (const auto& n : dom->second.at(at)) {
      if (!m_links[n.link].up || settled.contains(n.attachment))
        continue;
      Label next = l;
      next.latency += m_links[n.link].latency_us;
      next.atts.push_back(n.attachment);
      next.links.push_back(n.link);
      frontier.push(std::move(next));
    }
  }
  return std::nullopt;
}

std::optional<Route>
Substrate::route(const L3Locator& from, const L3Locator& to)
{
  if (from.domain_id != to.domain_id)
    return std::nullopt;
  if (from.attachment_id == to.attachment_id)
    return Route{};
  // computed once per unordered pair so both directions share the path
  bool reversed = to.attachment_id < from.attachment_id;
  const auto& lo = reversed ? to.attachment_id : from.attachment_id;
  const auto& hi = reversed ? from.attachment_id : to.attachment_id;
  Key key{from.domain_id, lo, hi};
  auto it = m_cache.find(key);
  if (it == m_cache.end())
    it = m_cache.emplace(key, compute(from.domain_id, lo, hi)).first;
  if (!it->second)
    return std::nullopt;
  Route r = *it->second;
  if (reversed)
    std::reverse(r.begin(), r.end());
  return r;
}

std::uint64_t
Substrate::latency(const Route& r) const
{
  std::uint64_t total = 0;
  for (auto l : r)
    total += m_links[l].latency_us;
  return total;
}

Rational
Substrate::min_capacity(const Route& r) const
{
  if (r.empty())
    return 0;
  Rational m = m_links[r.front()].capacity;
  for (auto l : r)
    m = std::min(m, m_links[l].capacity);
  return m;
}

Rational
Substrate::min_available(const Route& r) const
{
  if (r.empty())
    return 0;
  Rational m = m_links[r.front()].available;
  for (auto l : r)
    m = std::min(m, m_links[l].available);
  return m;
}

Rational
Substrate::cost(const Route& r) const
{
  Rational total = 0;
  for (auto l : r)
    total += m_links[l].cost;
  return total;
}

std::uint64_t
Substrate::serialization_us(std::size_t link, std::size_t payload_bytes) const
{
  return ceil_to_u64(Rational(payload_bytes * 8) / m_links.at(link).available);
}

void
Substrate::set_down(std::size_t link)
{
  m_links.at(link).up = false;
  m_cache.clear();
}

}  // namespace l5::simnet
