#pragma once

// Scenario configuration: the JSON document the simulator and the l5sim tool
// consume. Field names are part of the external interface; see
// scenarios/README.md for the schema.

#include "l5/addressing.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace l5::scenario {

enum class Mode { Baseline, L5 };

std::string_view to_string(Mode mode) noexcept;
/// "baseline" or "l5"; nullopt otherwise.
std::optional<Mode> parse_mode(std::string_view text) noexcept;

struct DomainConfig {
  std::string id;
  std::vector<std::string> attachments;
};

struct LinkConfig {
  std::string id;
  std::string domain;
  std::string a;
  std::string b;
  double capacity_mbps = 0;
  std::uint64_t latency_us = 0;
  double loss_prob = 0;
  double background_utilization = 0;
  std::optional<double> cost;  ///< expense for distribution trees; latency when absent
};

struct AnchorConfig {
  std::string name;
  std::vector<L3Locator> ports;
  std::vector<std::string> peers;
  bool gateway = false;
};

struct HostConfig {
  std::string name;
  L3Locator locator;
  std::string home_anchor;
};

struct PolicyEntry {
  std::string tag;
  double weight = 1;
};

struct OpenSession {
  std::string id;
  std::string src;
  std::string dst;
  std::string tag;
  std::uint64_t bytes = 0;
  std::optional<double> demand_cap_mbps;
};

struct Publish {
  std::string id;
  std::string publisher;
  std::vector<std::string> subscribers;
  std::string tag;
  std::uint64_t bytes = 0;
  std::optional<std::string> name;  ///< data name the tree carries
};

struct Subscribe {
  std::string requester;  ///< gateway anchor
  std::string name;
  std::string tag;
};

struct Join {
  std::string tree;
  std::string subscriber;
};

struct Stage {
  std::string gateway;
  std::string name;
  std::uint64_t bytes = 0;
  std::uint64_t ttl_us = 0;
};

struct LinkDown {
  std::string link;
};

using Action = std::variant<OpenSession, Publish, Subscribe, Join, Stage, LinkDown>;

struct EventConfig {
  std::uint64_t at_us = 0;  ///< offset from the end of initial topology discovery
  Action action;
};

std::string_view action_name(const Action& action) noexcept;

struct ScenarioConfig {
  std::string name;
  std::uint64_t seed = 0;
  Mode mode = Mode::L5;
  std::uint64_t horizon_us = 0;  ///< absolute; 0 = run until the queue drains
  std::uint32_t k_paths = 2;
  std::vector<DomainConfig> domains;
  std::vector<LinkConfig> links;
  std::vector<AnchorConfig> anchors;
  std::vector<HostConfig> hosts;
  std::vector<PolicyEntry> policy;
  std::vector<EventConfig> events;
};

struct Diagnostic {
  std::string path;  ///< e.g. "links[2].loss_prob"
  std::string message;
};

struct Validation {
  std::optional<ScenarioConfig> config;  ///< set iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;
};

/// Throws Error{ParseError} (message carries line and column) when the text
/// is not JSON; every schema, range and reference problem is a diagnostic.
Validation validate_text(std::string_view text);
Validation validate_file(const std::string& path);

/// Like validate_*, but throws Error{ConfigInvalid} listing the diagnostics.
ScenarioConfig load_text(std::string_view text);
ScenarioConfig load_file(const std::string& path);

/// Canonical JSON of the configuration.
std::string to_json_text(const ScenarioConfig& config);
/// Digest of everything except seed and mode.
std::uint64_t scenario_hash(const ScenarioConfig& config);
/// Digest of domains, links, anchors and hosts only.
std::uint64_t topology_hash(const ScenarioConfig& config);

}  // namespace l5::scenario
