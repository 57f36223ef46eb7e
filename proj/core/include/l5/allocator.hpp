#pragma once

// Weighted max-min fair rate allocation by progressive filling, computed in
// exact rational arithmetic and reported in Mbps.

#include "l5/addressing.hpp"
#include "l5/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace l5::allocator {

using LinkId = std::string;
using FlowId = std::string;

struct Demand {
  FlowId id;
  Rational weight{1};
  std::set<LinkId> links;
  std::optional<Rational> cap;  ///< nullopt = unbounded
  std::string tag;
};

struct DemandMatrix {
  std::vector<Demand> sessions;
};

struct FlowAllocation {
  std::map<FlowId, Rational> exact_rates;
  std::map<LinkId, Rational> exact_residuals;
  std::map<FlowId, double> rates;
  std::map<LinkId, double> residuals;
};

using CapacityMap = std::map<LinkId, Rational>;

/// Raises every unfrozen session's rate/weight uniformly; a saturated link
/// freezes its sessions, a capped session freezes at its cap. Throws
/// Error{UnknownLink} for a route through a link missing from `capacities`
/// and Error{InvalidDemand} for duplicate ids, non-positive weights, negative
/// capacities or an uncapped session that crosses no link.
FlowAllocation water_fill(const CapacityMap& capacities, const DemandMatrix& demands);

/// Sum of allocated rate per tag. Throws Error{UnknownTag} if a session's tag
/// is not in `policy`. Tags in the policy with no sessions report 0.
std::map<std::string, double> domain_shares(const FlowAllocation& alloc,
                                            const DemandMatrix& demands,
                                            const std::vector<ScienceDomainTag>& policy);

}  // namespace l5::allocator
