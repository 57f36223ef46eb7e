#pragma once

// Deterministic discrete-event run of a scenario: L3 substrate, anchor
// control plane (flooding), allocation epochs, sessions, distribution trees
// and gateways, all driven by one event queue and one seeded RNG.

#include "l5/anchor.hpp"
#include "l5/scenario.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace l5::simnet {

struct PathReport {
  std::uint32_t path_id = 0;
  std::vector<std::string> hops;
  std::vector<std::string> l3_links;
  std::uint64_t metric_us = 0;
  double rate_mbps = 0;  ///< final allocation
  std::uint64_t segments = 0;
  std::uint64_t retransmits = 0;
  std::uint64_t bytes = 0;
  double rate_compliance = 0;  ///< emitted bits / allocated bits over the busy span
  bool retired = false;
};

struct SessionReport {
  std::string id;
  std::uint64_t session_id = 0;
  std::string kind;     ///< "unicast", "fanout" (baseline pub/sub) or "fetch"
  std::string routing;  ///< "direct-l3" or "l5"
  std::string src;
  std::string dst;
  std::string tag;
  std::uint64_t bytes = 0;
  std::uint64_t delivered_bytes = 0;
  bool complete = false;
  std::string source_hash;
  std::string delivered_hash;
  bool hash_match = false;
  std::uint64_t opened_at_us = 0;
  std::optional<std::uint64_t> completed_at_us;
  double throughput_mbps = 0;
  double potential_mbps = 0;           ///< sum of raw bottlenecks over k disjoint paths
  double residual_potential_mbps = 0;  ///< same, after background utilization
  std::uint64_t duplicates = 0;
  std::vector<PathReport> paths;
};

struct TreeEdgeReport {
  std::string from;
  std::string to;
  std::string kind;  ///< "access_up", "tree" or "access_down"
  std::vector<std::string> l3_links;
  double rate_mbps = 0;
  std::uint64_t segments = 0;
  std::uint64_t original_segments = 0;
  std::uint64_t retransmits = 0;
  double rate_compliance = 0;
};

struct SubscriberReport {
  std::string name;
  std::string anchor;
  std::uint64_t joined_at_us = 0;
  std::uint64_t offset_segments = 0;
  std::uint64_t expected_bytes = 0;
  std::uint64_t delivered_bytes = 0;
  std::string expected_hash;
  std::string delivered_hash;
  bool complete = false;
  bool hash_match = false;
};

struct TreeReport {
  std::string id;
  std::string publisher;
  std::string root;
  std::string tag;
  std::optional<std::string> object;
  std::uint64_t bytes = 0;
  std::uint64_t payload_segments = 0;
  std::vector<std::pair<std::string, std::string>> edges;  ///< anchor tree edges
  std::vector<TreeEdgeReport> legs;
  std::vector<SubscriberReport> subscribers;
  double tree_cost = 0;     ///< cost-weighted anchor-link crossings per segment
  double unicast_cost = 0;  ///< same, if each subscriber had its own path
  bool complete = false;
};

struct LinkReport {
  std::string id;
  std::string domain;
  std::string a;
  std::string b;
  double capacity_mbps = 0;
  double available_mbps = 0;
  double cost = 0;
  bool up = true;
  std::uint64_t transmitted = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t original_data = 0;
  std::uint64_t retransmitted_data = 0;
  std::uint64_t acks = 0;
  std::uint64_t bytes = 0;
  double utilization = 0;  ///< payload bits / (available x data-phase duration)
};

struct EpochReport {
  std::uint32_t index = 0;
  std::string cause;
  std::map<std::string, double> rates;
  std::map<std::string, double> domain_shares;
};

struct TopologyReport {
  bool converged = false;  ///< all databases identical at first quiescence
  bool converged_at_end = false;
  std::uint64_t discovery_done_us = 0;
  std::uint64_t originations = 0;
  std::uint64_t lsa_transmissions = 0;
  std::uint64_t max_transmissions_per_origination = 0;
  std::uint64_t peer_links = 0;
  std::map<std::string, std::string> database_hashes;
};

struct CatalogEntryReport {
  std::string name;
  std::uint64_t size = 0;
  std::uint64_t staged_at_us = 0;
  std::uint64_t ttl_us = 0;
  std::string content_hash;
};

struct GatewayReport {
  std::string name;
  std::vector<CatalogEntryReport> catalog;
};

struct SubscriptionReport {
  std::string requester;
  std::string name;
  std::uint64_t at_us = 0;
  std::string outcome;  ///< "local", "join", "unicast" or "unavailable"
  std::string source;
  std::string source_hash;
  std::string stored_hash;
  bool replicated = false;
};

struct FaultReport {
  std::uint64_t l3_violations = 0;
  std::uint64_t causality_violations = 0;
  std::uint64_t unreachable = 0;
  std::uint64_t dropped_unknown = 0;
  std::uint64_t misaddressed = 0;
  std::vector<std::string> messages;
};

struct Summary {
  double throughput_mbps = 0;
  double potential_mbps = 0;
  double residual_potential_mbps = 0;
  double potential_fraction = 0;
  double residual_fraction = 0;
  /// potential_fraction in baseline mode, residual_fraction in l5 mode
  double headline_fraction = 0;
};

struct RunResult {
  std::string scenario;
  std::string scenario_hash;
  std::string topology_hash;
  std::uint64_t seed = 0;
  std::string mode;
  std::string trace_hash;
  std::uint64_t events = 0;
  std::uint64_t end_time_us = 0;
  bool horizon_reached = false;
  Summary summary;
  std::vector<SessionReport> sessions;
  std::vector<EpochReport> allocations;
  std::vector<LinkReport> links;
  std::vector<TreeReport> trees;
  std::map<std::string, std::map<std::string, anchor::TagCounters>> per_anchor_tags;
  TopologyReport topology;
  std::vector<GatewayReport> gateways;
  std::vector<SubscriptionReport> subscriptions;
  FaultReport faults;
};

/// Runs to queue exhaustion or the configured horizon. The config must have
/// passed validation.
RunResult run_scenario(const scenario::ScenarioConfig& config);

}  // namespace l5::simnet
