#include "l5/allocator.hpp"

#include "l5/error.hpp"

namespace l5::allocator {

FlowAllocation
water_fill(const CapacityMap& capacities, const DemandMatrix& demands)
{
  for (const auto& [link, cap] : capacities)
    if (cap < 0)
      throw Error(ErrorCode::InvalidDemand, "link '" + link + "' has negative capacity");

  const auto& sessions = demands.sessions;
  const std::size_t n = sessions.size();
  std::set<FlowId> ids;
  for (const auto& s : sessions) {
    if (!ids.insert(s.id).second)
      throw Error(ErrorCode::InvalidDemand, "duplicate session id '" + s.id + "'");
    if (s.weight <= 0)
      throw Error(ErrorCode::InvalidDemand, "session '" + s.id + "' has non-positive weight");
    if (s.cap && *s.cap < 0)
      throw Error(ErrorCode::InvalidDemand, "session '" + s.id + "' has a negative cap");
    if (s.links.empty() && !s.cap)
      throw Error(ErrorCode::InvalidDemand, "session '" + s.id + "' crosses no link and is uncapped");
    for (const auto& l : s.links)
      if (!capacities.contains(l))
        throw Error(ErrorCode::UnknownLink, "session '" + s.id + "' crosses unknown link '" + l + "'");
  }

  std::vector<Rational> rate(n, Rational(0));
  std::vector<bool> frozen(n, false);
  std::map<LinkId, Rational> residual = capacities;

  std::map<LinkId, std::vector<std::size_t>> users;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& l : sessions[i].links)
      users[l].push_back(i);

  auto freeze_saturated = [&] {
    for (const auto& [link, members] : users) {
      if (residual[link] != 0)
        continue;
      for (auto i : members)
        frozen[i] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!frozen[i] && sessions[i].cap && rate[i] >= *sessions[i].cap)
        frozen[i] = true;
  };
  freeze_saturated();

  while (true) {
    std::optional<Rational> step;
    auto consider = [&](const Rational& candidate) {
      if (!step || candidate < *step)
        step = candidate;
    };

    std::map<LinkId, Rational> active_weight;
    for (const auto& [link, members] : users) {
      Rational w = 0;
      for (auto i : members)
        if (!frozen[i])
          w += sessions[i].weight;
      if (w > 0) {
        active_weight[link] = w;
        consider(residual[link] / w);
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!frozen[i] && sessions[i].cap)
        consider((*sessions[i].cap - rate[i]) / sessions[i].weight);

    if (!step)
      break;  // nothing left unfrozen

    for (std::size_t i = 0; i < n; ++i)
      if (!frozen[i])
        rate[i] += *step * sessions[i].weight;
    for (const auto& [link, w] : active_weight)
      residual[link] -= *step * w;
    freeze_saturated();
  }

  FlowAllocation out;
  for (std::size_t i = 0; i < n; ++i) {
    out.exact_rates[sessions[i].id] = rate[i];
    out.rates[sessions[i].id] = to_double(rate[i]);
  }
  for (const auto& [link, r] : residual) {
    out.exact_residuals[link] = r;
    out.residuals[link] = to_double(r);
  }
  return out;
}

std::map<std::string, double>
domain_shares(const FlowAllocation& alloc, const DemandMatrix& demands,
              const std::vector<ScienceDomainTag>& policy)
{
  std::map<std::string, Rational> exact;
  for (const auto& entry : policy)
    exact[entry.tag] = 0;
  for (const auto& s : demands.sessions) {
    auto it = exact.find(s.tag);
    if (it == exact.end())
      throw Error(ErrorCode::UnknownTag, "session '" + s.id + "' carries unlisted tag '" + s.tag + "'");
    auto r = alloc.exact_rates.find(s.id);
    if (r != alloc.exact_rates.end())
      it->second += r->second;
  }
  std::map<std::string, double> shares;
  for (const auto& [tag, value] : exact)
    shares[tag] = to_double(value);
  return shares;
}

}  // namespace l5::allocator
