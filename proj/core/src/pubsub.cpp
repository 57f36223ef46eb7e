#include "l5/pubsub.hpp"

#include "l5/error.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace l5::pubsub {

namespace {

struct Label {
  Rational cost;
  std::vector<L5Address> hops;

  friend bool operator>(const Label& a, const Label& b)
  {
    if (a.cost != b.cost)
      return a.cost > b.cost;
    return a.hops > b.hops;
  }
};

}  // namespace

std::set<L5Address>
DistributionTree::nodes() const
{
  std::set<L5Address> out{root};
  for (const auto& e : edges) {
    out.insert(e.parent);
    out.insert(e.child);
  }
  return out;
}

std::vector<L5Address>
DistributionTree::children(const L5Address& node) const
{
  std::vector<L5Address> out;
  for (const auto& e : edges)
    if (e.parent == node)
      out.push_back(e.child);
  return out;
}

std::vector<L5Address>
DistributionTree::spt_path(const L5Address& anchor) const
{
  std::vector<L5Address> path{anchor};
  while (path.back() != root) {
    auto it = spt_parent.find(path.back());
    if (it == spt_parent.end())
      throw Error(ErrorCode::Unreachable, "'" + anchor.str() + "' is not reachable from '" +
                                              root.str() + "'");
    path.push_back(it->second);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Rational
link_cost(const topology::TopologyGraph& graph, const CostMap& cost, const L5Address& a,
          const L5Address& b)
{
  if (auto it = cost.find(pathfinder::anchor_link(a, b)); it != cost.end())
    return it->second;
  const auto* e = graph.edge(a, b);
  if (!e)
    throw Error(ErrorCode::NotAdjacent, "'" + a.str() + "' and '" + b.str() + "' are not adjacent");
  return Rational(e->latency_us);
}

L5Address
attachment_anchor(const topology::TopologyGraph& graph, const L5Address& node)
{
  if (graph.is_anchor(node))
    return node;
  if (!graph.contains(node))
    throw Error(ErrorCode::UnknownEndpoint, "'" + node.str() + "' is not in the topology");
  for (const auto& e : graph.edges_from(node))
    if (graph.is_anchor(e.to))
      return e.to;
  throw Error(ErrorCode::UnknownEndpoint, "'" + node.str() + "' has no anchor");
}

DistributionTree
build_tree(const topology::TopologyGraph& graph, const L5Address& publisher,
           const std::set<L5Address>& subscribers, const CostMap& cost)
{
  DistributionTree tree;
  tree.publisher = publisher;
  tree.root = attachment_anchor(graph, publisher);
  tree.link_cost = cost;
  for (const auto& s : subscribers)
    tree.attachment[s] = attachment_anchor(graph, s);

  // Label-setting search over anchors only, keyed on (cost, hop sequence).
  std::priority_queue<Label, std::vector<Label>, std::greater<>> frontier;
  std::set<L5Address> settled;
  frontier.push({Rational(0), {tree.root}});
  while (!frontier.empty()) {
    Label label = frontier.top();
    frontier.pop();
    const L5Address& at = label.hops.back();
    if (!settled.insert(at).second)
      continue;
    tree.spt_distance[at] = label.cost;
    if (label.hops.size() > 1)
      tree.spt_parent[at] = label.hops[label.hops.size() - 2];
    for (const auto& e : graph.edges_from(at)) {
      if (!graph.is_anchor(e.to) || settled.contains(e.to))
        continue;
      Label next{label.cost + link_cost(graph, cost, at, e.to), label.hops};
      next.hops.push_back(e.to);
      frontier.push(std::move(next));
    }
  }

  std::vector<std::string> unreachable;
  for (const auto& [sub, anchor] : tree.attachment)
    if (!tree.spt_distance.contains(anchor))
      unreachable.push_back(sub.str());
  if (!unreachable.empty()) {
    std::string names;
    for (const auto& n : unreachable)
      names += (names.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::Unreachable, "unreachable subscribers: " + names);
  }

  for (const auto& s : subscribers)
    graft(tree, graph, s);
  return tree;
}

std::vector<TreeEdge>
graft(DistributionTree& tree, const topology::TopologyGraph& graph, const L5Address& subscriber)
{
  auto anchor = attachment_anchor(graph, subscriber);
  auto path = tree.spt_path(anchor);
  tree.subscribers.insert(subscriber);
  tree.attachment[subscriber] = anchor;

  std::vector<TreeEdge> added;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    TreeEdge e{path[i], path[i + 1]};
    if (tree.edges.insert(e).second)
      added.push_back(std::move(e));
  }
  return added;
}

bool
is_valid_tree(const DistributionTree& tree)
{
  auto nodes = tree.nodes();
  if (tree.edges.size() + 1 != nodes.size())
    return false;
  std::map<L5Address, int> indegree;
  for (const auto& e : tree.edges)
    if (++indegree[e.child] > 1 || e.child == tree.root)
      return false;

  std::set<L5Address> seen{tree.root};
  std::deque<L5Address> work{tree.root};
  while (!work.empty()) {
    auto at = work.front();
    work.pop_front();
    for (const auto& c : tree.children(at))
      if (seen.insert(c).second)
        work.push_back(c);
  }
  if (seen != nodes)
    return false;
  for (const auto& s : tree.subscribers) {
    auto it = tree.attachment.find(s);
    if (it == tree.attachment.end() || !seen.contains(it->second))
      return false;
  }
  return true;
}

std::vector<DeliveryEdge>
delivery_edges(const DistributionTree& tree)
{
  std::vector<DeliveryEdge> out;
  if (tree.publisher != tree.root)
    out.push_back({tree.publisher, tree.root, EdgeKind::AccessUp});

  std::map<L5Address, std::vector<L5Address>> down;
  for (const auto& s : tree.subscribers) {
    const auto& anchor = tree.attachment.at(s);
    if (anchor != s)
      down[anchor].push_back(s);
  }

  std::deque<L5Address> work{tree.root};
  while (!work.empty()) {
    auto at = work.front();
    work.pop_front();
    for (const auto& c : tree.children(at)) {
      out.push_back({at, c, EdgeKind::Tree});
      work.push_back(c);
    }
    for (const auto& s : down[at])
      out.push_back({at, s, EdgeKind::AccessDown});
  }
  return out;
}

LinkUses
tree_link_uses(const DistributionTree& tree)
{
  LinkUses uses;
  for (const auto& e : tree.edges)
    ++uses[pathfinder::anchor_link(e.parent, e.child)];
  return uses;
}

LinkUses
unicast_link_uses(const DistributionTree& tree)
{
  LinkUses uses;
  for (const auto& s : tree.subscribers) {
    auto path = tree.spt_path(tree.attachment.at(s));
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      ++uses[pathfinder::anchor_link(path[i], path[i + 1])];
  }
  return uses;
}

Rational
weighted_crossings(const topology::TopologyGraph& graph, const LinkUses& uses, const CostMap& cost)
{
  Rational total = 0;
  for (const auto& [link, n] : uses)
    total += link_cost(graph, cost, link.first, link.second) * n;
  return total;
}

}  // namespace l5::pubsub
