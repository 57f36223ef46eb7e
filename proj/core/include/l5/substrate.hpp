#pragma once

// Simulated L3: opaque domains that carry traffic between their attachment
// points over one configured best internal path (lowest latency, ties by
// attachment sequence). Routes are symmetric and cached until a link fails.

#include "l5/addressing.hpp"
#include "l5/rational.hpp"
#include "l5/scenario.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace l5::simnet {

struct SimLink {
  std::string id;
  std::string domain;
  std::string a;
  std::string b;
  Rational capacity;   ///< Mbps
  Rational available;  ///< capacity x (1 - background_utilization)
  std::uint64_t latency_us = 0;
  double loss_prob = 0;
  Rational cost;  ///< configured expense, latency when absent
  bool up = true;
};

using Route = std::vector<std::size_t>;  ///< link indices, in travel order

class Substrate {
 public:
  explicit Substrate(const scenario::ScenarioConfig& config);

  const std::vector<SimLink>& links() const noexcept { return m_links; }
  const SimLink& link(std::size_t index) const { return m_links.at(index); }
  std::optional<std::size_t> find_link(const std::string& id) const;

  /// Empty route for from == to; nullopt across domains or when the domain
  /// is partitioned.
  std::optional<Route> route(const L3Locator& from, const L3Locator& to);

  std::uint64_t latency(const Route& r) const;
  /// Bottleneck of raw and of available capacity; 0 for an empty route.
  Rational min_capacity(const Route& r) const;
  Rational min_available(const Route& r) const;
  Rational cost(const Route& r) const;

  /// ceil(payload bits / available capacity) in microseconds.
  std::uint64_t serialization_us(std::size_t link, std::size_t payload_bytes) const;

  void set_down(std::size_t link);

 private:
  using Key = std::tuple<std::string, std::string, std::string>;
  struct Neighbor {
    std::string attachment;
    std::size_t link;
  };

  std::optional<Route> compute(const std::string& domain, const std::string& from,
                               const std::string& to) const;

  std::vector<SimLink> m_links;
  std::map<std::string, std::size_t> m_index;
  std::map<std::string, std::map<std::string, std::vector<Neighbor>>> m_adjacency;
  std::map<Key, std::optional<Route>> m_cache;
};

}  // namespace l5::simnet
