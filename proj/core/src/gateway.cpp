#include "l5/gateway.hpp"

#include "l5/error.hpp"
#include "l5/pathfinder.hpp"
#include "l5/wire.hpp"

namespace l5::gateway {

std::shared_ptr<const std::vector<std::uint8_t>>
synthetic_content(const L5Address& name, std::uint64_t size)
{
  return std::make_shared<const std::vector<std::uint8_t>>(
    wire::synthetic_bytes(wire::fnv1a64(name.str()), size));
}

void
Catalog::put(StagedObject object)
{
  auto key = object.name;
  m_objects.insert_or_assign(std::move(key), std::move(object));
}

std::optional<StagedObject>
Catalog::lookup(const L5Address& name, Micros now)
{
  auto it = m_objects.find(name);
  if (it == m_objects.end())
    return std::nullopt;
  if (it->second.expired(now)) {
    m_objects.erase(it);
    return std::nullopt;
  }
  return it->second;
}

std::size_t
Catalog::sweep(Micros now)
{
  return std::erase_if(m_objects, [&](const auto& kv) { return kv.second.expired(now); });
}

ResolverTable
store_replica(Gateway& gw, const ResolverTable& resolver, const L5Address& name,
              std::shared_ptr<const std::vector<std::uint8_t>> content, Micros ttl, Micros now)
{
  if (!name.is_data())
    throw Error(ErrorCode::NotDataName, "'" + name.str() + "' is not a data name");
  StagedObject obj;
  obj.name = name;
  obj.size = content->size();
  obj.staged_at = now;
  obj.ttl = ttl;
  obj.content_hash = wire::fnv1a64(std::span<const std::uint8_t>(*content));
  obj.content = std::move(content);
  gw.catalog.put(std::move(obj));
  return resolver.registered(name, gw.locator);
}

ResolverTable
stage_object(Gateway& gw, const ResolverTable& resolver, const L5Address& name, std::uint64_t size,
             Micros ttl, Micros now)
{
  if (!name.is_data())
    throw Error(ErrorCode::NotDataName, "'" + name.str() + "' is not a data name");
  return store_replica(gw, resolver, name, synthetic_content(name, size), ttl, now);
}

SubscriptionPlan
plan_subscription(const L5Address& requester, const L5Address& name, Micros now,
                  const ResolverTable& resolver, const topology::TopologyGraph& graph,
                  std::map<L5Address, Gateway>& gateways,
                  const std::map<L5Address, std::uint64_t>& active_trees)
{
  if (auto self = gateways.find(requester); self != gateways.end())
    if (auto hit = self->second.catalog.lookup(name, now))
      return LocalHit{std::move(*hit)};

  if (auto it = active_trees.find(name); it != active_trees.end())
    return JoinTree{it->second};

  auto locators = resolver.resolve(name);
  if (locators.empty())
    throw Error(ErrorCode::ObjectUnavailable, "'" + name.str() + "' is not staged anywhere");

  std::optional<UnicastFrom> best;
  for (auto& [addr, gw] : gateways) {
    if (addr == requester || !locators.contains(gw.locator))
      continue;
    if (!gw.catalog.lookup(name, now))
      continue;
    auto path = pathfinder::shortest_path(graph, addr, requester);
    if (!path)
      continue;
    // gateways iterate in name order, so strict < keeps the lexicographic tie-break
    if (!best || path->metric_us < best->metric_us)
      best = UnicastFrom{addr, path->metric_us};
  }
  if (!best)
    throw Error(ErrorCode::ObjectUnavailable,
                "no reachable gateway holds an unexpired copy of '" + name.str() + "'");
  return *best;
}

}  // namespace l5::gateway
