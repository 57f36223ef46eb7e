#pragma once

// Metrics JSON for a run, and the side-by-side comparison of two reports.

#include "l5/simulator.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace l5::report {

/// Canonical metrics document: sorted keys, two-space indent, trailing
/// newline. Equal results give byte-equal text.
std::string to_json_text(const simnet::RunResult& result);

struct Comparison {
  /// Which report is the numerator: "a/b", "b/a", or when the modes differ
  /// always the l5 report over the baseline one.
  std::string orientation;
  double throughput_ratio = 0;      ///< headline fractions
  double raw_throughput_ratio = 0;  ///< aggregate Mbps
  std::string costly_link;          ///< highest-cost L3 link, ties by id
  std::optional<double> crossings_ratio;  ///< original data segments on costly_link
  std::optional<double> weighted_crossings_ratio;  ///< sum of cost x original data segments
  std::map<std::string, std::pair<double, double>> tag_shares;  ///< last epoch, (num, den)
  std::string json;
  std::string table;
};

/// Throws Error{ParseError} for malformed input and Error{TopologyMismatch}
/// when the reports come from different topologies.
Comparison compare(std::string_view report_a, std::string_view report_b);

}  // namespace l5::report
