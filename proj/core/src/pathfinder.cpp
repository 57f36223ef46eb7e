#include "l5/pathfinder.hpp"

#include "l5/error.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

namespace l5::pathfinder {

namespace {

struct Label {
  std::uint64_t metric;
  std::vector<L5Address> hops;

  friend bool operator>(const Label& a, const Label& b)
  {
    if (a.metric != b.metric)
      return a.metric > b.metric;
    return a.hops > b.hops;
  }
};

}  // namespace

std::set<AnchorLink>
anchor_links(const topology::TopologyGraph& graph, const L5Path& path)
{
  std::set<AnchorLink> links;
  for (std::size_t i = 0; i + 1 < path.hops.size(); ++i) {
    const auto& u = path.hops[i];
    const auto& v = path.hops[i + 1];
    if (graph.is_anchor(u) && graph.is_anchor(v))
      links.insert(anchor_link(u, v));
  }
  return links;
}

std::optional<L5Path>
describe_path(const topology::TopologyGraph& graph, const std::vector<L5Address>& hops)
{
  L5Path path;
  path.hops = hops;
  path.min_capacity_mbps = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < hops.size(); ++i) {
    const auto* e = graph.edge(hops[i], hops[i + 1]);
    if (!e)
      return std::nullopt;
    path.metric_us += e->latency_us;
    path.min_capacity_mbps = std::min(path.min_capacity_mbps, e->capacity_mbps);
    path.link_domains.push_back(e->domain_id);
  }
  if (hops.size() < 2)
    path.min_capacity_mbps = 0;
  return path;
}

std::optional<L5Path>
shortest_path(const topology::TopologyGraph& graph, const L5Address& src, const L5Address& dst,
              const std::set<AnchorLink>& excluded)
{
  if (src == dst)
    return std::nullopt;

  // Label-setting search on (metric, hop sequence). Hop sequences ending at
  // the same node never prefix one another, so the order is a valid
  // Dijkstra key and yields the lexicographically least shortest path.
  std::priority_queue<Label, std::vector<Label>, std::greater<>> frontier;
  std::set<L5Address> settled;
  frontier.push({0, {src}});

  while (!frontier.empty()) {
    Label label = frontier.top();
    frontier.pop();
    const L5Address& at = label.hops.back();
    if (!settled.insert(at).second)
      continue;
    if (at == dst)
      return describe_path(graph, label.hops);
    if (at != src && !graph.is_anchor(at))
      continue;  // hosts are never transit
    for (const auto& e : graph.edges_from(at)) {
      if (settled.contains(e.to))
        continue;
      if (graph.is_anchor(at) && graph.is_anchor(e.to) && excluded.contains(anchor_link(at, e.to)))
        continue;
      Label next{label.metric + e.latency_us, label.hops};
      next.hops.push_back(e.to);
      frontier.push(std::move(next));
    }
  }
  return std::nullopt;
}

std::vector<L5Path>
k_disjoint_paths(const topology::TopologyGraph& graph, const L5Address& src, const L5Address& dst,
                 std::size_t k)
{
  if (k == 0)
    throw std::invalid_argument("k_disjoint_paths needs k >= 1");
  if (!graph.contains(src))
    throw Error(ErrorCode::UnknownEndpoint, "'" + src.str() + "' is not in the topology");
  if (!graph.contains(dst))
    throw Error(ErrorCode::UnknownEndpoint, "'" + dst.str() + "' is not in the topology");

  std::vector<L5Path> paths;
  std::set<AnchorLink> used;
  while (paths.size() < k) {
    auto next = shortest_path(graph, src, dst, used);
    if (!next)
      break;
    next->path_id = static_cast<PathId>(paths.size());
    auto links = anchor_links(graph, *next);
    paths.push_back(std::move(*next));
    // a path with no anchor-anchor link cannot be made disjoint from itself
    if (links.empty())
      break;
    used.insert(links.begin(), links.end());
  }
  return paths;
}

L3Locator
hop_locator(const ResolverTable& resolver, const L5Address& hop, const std::string& domain)
{
  auto locators = resolver.resolve(hop);
  if (locators.empty())
    throw Error(ErrorCode::UnknownEndpoint, "'" + hop.str() + "' has no locator");
  if (domain.empty())
    return *locators.begin();
  for (const auto& loc : locators)
    if (loc.domain_id == domain)
      return loc;
  throw Error(ErrorCode::UnknownEndpoint,
              "'" + hop.str() + "' has no locator in domain '" + domain + "'");
}

L3Locator
first_hop_locator(const L5Path& path, const ResolverTable& resolver)
{
  if (path.hops.size() < 2)
    throw std::invalid_argument("first_hop_locator needs a path of at least two hops");
  std::string domain = path.link_domains.empty() ? std::string{} : path.link_domains.front();
  return hop_locator(resolver, path.hops[1], domain);
}

}  // namespace l5::pathfinder
