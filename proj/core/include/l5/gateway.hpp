#pragma once

// Data-aware edge gateway: an anchor with an ephemeral catalog of staged
// objects, brokering transfers by object name.

#include "l5/addressing.hpp"
#include "l5/topology.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace l5::gateway {

using Micros = std::uint64_t;

struct StagedObject {
  L5Address name;
  std::uint64_t size = 0;
  Micros staged_at = 0;
  Micros ttl = 0;
  std::uint64_t content_hash = 0;
  std::shared_ptr<const std::vector<std::uint8_t>> content;

  /// Present through staged_at + ttl inclusive.
  bool expired(Micros now) const noexcept { return now > staged_at + ttl; }
};

/// Deterministic payload for a named object of `size` bytes.
std::shared_ptr<const std::vector<std::uint8_t>> synthetic_content(const L5Address& name,
                                                                   std::uint64_t size);

class Catalog {
 public:
  void put(StagedObject object);
  /// Unexpired entry or nullopt; an expired entry is purged on the spot.
  std::optional<StagedObject> lookup(const L5Address& name, Micros now);
  /// Drops every expired entry; returns how many went.
  std::size_t sweep(Micros now);

  std::size_t size() const noexcept { return m_objects.size(); }
  const std::map<L5Address, StagedObject>& entries() const noexcept { return m_objects; }

 private:
  std::map<L5Address, StagedObject> m_objects;
};

struct Gateway {
  L5Address anchor;
  L3Locator locator;  ///< where staged objects are registered
  Catalog catalog;
};

/// Stages (or refreshes) `name` with synthetic content and registers the
/// gateway's locator for it. Throws Error{NotDataName}.
ResolverTable stage_object(Gateway& gw, const ResolverTable& resolver, const L5Address& name,
                           std::uint64_t size, Micros ttl, Micros now);

/// Stores bytes fetched from elsewhere (demand-driven replication).
ResolverTable store_replica(Gateway& gw, const ResolverTable& resolver, const L5Address& name,
                            std::shared_ptr<const std::vector<std::uint8_t>> content, Micros ttl,
                            Micros now);

struct LocalHit {
  StagedObject object;
};
struct JoinTree {
  std::uint64_t tree = 0;
};
struct UnicastFrom {
  L5Address source;  ///< gateway anchor holding the object
  std::uint64_t metric_us = 0;
};
using SubscriptionPlan = std::variant<LocalHit, JoinTree, UnicastFrom>;

/// Local copy first, then an active tree publishing `name`, else the
/// reachable gateway with the lowest shortest-path metric (ties by name).
/// Throws Error{ObjectUnavailable} when nobody can serve it.
SubscriptionPlan plan_subscription(const L5Address& requester, const L5Address& name, Micros now,
                                   const ResolverTable& resolver,
                                   const topology::TopologyGraph& graph,
                                   std::map<L5Address, Gateway>& gateways,
                                   const std::map<L5Address, std::uint64_t>& active_trees = {});

}  // namespace l5::gateway
