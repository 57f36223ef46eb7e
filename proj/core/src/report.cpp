#include "l5/report.hpp"

#include "l5/error.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <sstream>

namespace l5::report {

using nlohmann::json;

namespace {

template <class T>
json
opt(const std::optional<T>& v)
{
  return v ? json(*v) : json(nullptr);
}

json
paths_json(const std::vector<simnet::PathReport>& paths)
{
  json out = json::array();
  for (const auto& p : paths)
    out.push_back({{"path_id", p.path_id},
                   {"hops", p.hops},
                   {"l3_links", p.l3_links},
                   {"metric_us", p.metric_us},
                   {"rate_mbps", p.rate_mbps},
                   {"segments", p.segments},
                   {"retransmits", p.retransmits},
                   {"bytes", p.bytes},
                   {"rate_compliance", p.rate_compliance},
                   {"retired", p.retired}});
  return out;
}

json
to_json(const simnet::RunResult& r)
{
  json sessions = json::array();
  for (const auto& s : r.sessions)
    sessions.push_back({{"id", s.id},
                        {"session_id", s.session_id},
                        {"kind", s.kind},
                        {"routing", s.routing},
                        {"src", s.src},
                        {"dst", s.dst},
                        {"tag", s.tag},
                        {"bytes", s.bytes},
                        {"delivered_bytes", s.delivered_bytes},
                        {"complete", s.complete},
                        {"source_hash", s.source_hash},
                        {"delivered_hash", s.delivered_hash},
                        {"hash_match", s.hash_match},
                        {"opened_at_us", s.opened_at_us},
                        {"completed_at_us", opt(s.completed_at_us)},
                        {"throughput_mbps", s.throughput_mbps},
                        {"potential_mbps", s.potential_mbps},
                        {"residual_potential_mbps", s.residual_potential_mbps},
                        {"duplicates", s.duplicates},
                        {"paths", paths_json(s.paths)}});

  json allocations = json::array();
  for (const auto& e : r.allocations)
    allocations.push_back({{"index", e.index},
                           {"cause", e.cause},
                           {"rates_mbps", e.rates},
                           {"domain_shares", e.domain_shares}});

  json links = json::array();
  for (const auto& l : r.links)
    links.push_back({{"id", l.id},
                     {"domain", l.domain},
                     {"a", l.a},
                     {"b", l.b},
                     {"capacity_mbps", l.capacity_mbps},
                     {"available_mbps", l.available_mbps},
                     {"cost", l.cost},
                     {"up", l.up},
                     {"transmitted", l.transmitted},
                     {"delivered", l.delivered},
                     {"dropped", l.dropped},
                     {"in_flight", l.in_flight},
                     {"original_data", l.original_data},
                     {"retransmitted_data", l.retransmitted_data},
                     {"acks", l.acks},
                     {"bytes", l.bytes},
                     {"utilization", l.utilization}});

  json trees = json::array();
  for (const auto& t : r.trees) {
    json edges = json::array();
    for (const auto& [p, c] : t.edges)
      edges.push_back({p, c});
    json legs = json::array();
    for (const auto& l : t.legs)
      legs.push_back({{"from", l.from},
                      {"to", l.to},
                      {"kind", l.kind},
                      {"l3_links", l.l3_links},
                      {"rate_mbps", l.rate_mbps},
                      {"segments", l.segments},
                      {"original_segments", l.original_segments},
                      {"retransmits", l.retransmits},
                      {"rate_compliance", l.rate_compliance}});
    json subs = json::array();
    for (const auto& s : t.subscribers)
      subs.push_back({{"name", s.name},
                      {"anchor", s.anchor},
                      {"joined_at_us", s.joined_at_us},
                      {"offset_segments", s.offset_segments},
                      {"expected_bytes", s.expected_bytes},
                      {"delivered_bytes", s.delivered_bytes},
                      {"expected_hash", s.expected_hash},
                      {"delivered_hash", s.delivered_hash},
                      {"complete", s.complete},
                      {"hash_match", s.hash_match}});
    trees.push_back({{"id", t.id},
                     {"publisher", t.publisher},
                     {"root", t.root},
                     {"tag", t.tag},
                     {"object", opt(t.object)},
                     {"bytes", t.bytes},
                     {"payload_segments", t.payload_segments},
                     {"edges", edges},
                     {"legs", legs},
                     {"subscribers", subs},
                     {"tree_cost", t.tree_cost},
                     {"unicast_cost", t.unicast_cost},
                     {"complete", t.complete}});
  }

  json tags = json::object();
  for (const auto& [anchor, counters] : r.per_anchor_tags) {
    json row = json::object();
    for (const auto& [tag, c] : counters)
      row[tag] = {{"segments", c.segments}, {"bytes", c.bytes}};
    tags[anchor] = row;
  }

  const auto& tp = r.topology;
  json topo = {{"converged", tp.converged},
               {"converged_at_end", tp.converged_at_end},
               {"discovery_done_us", tp.discovery_done_us},
               {"originations", tp.originations},
               {"lsa_transmissions", tp.lsa_transmissions},
               {"max_transmissions_per_origination", tp.max_transmissions_per_origination},
               {"peer_links", tp.peer_links},
               {"database_hashes", tp.database_hashes}};

  json gateways = json::array();
  for (const auto& g : r.gateways) {
    json cat = json::array();
    for (const auto& c : g.catalog)
      cat.push_back({{"name", c.name},
                     {"size", c.size},
                     {"staged_at_us", c.staged_at_us},
                     {"ttl_us", c.ttl_us},
                     {"content_hash", c.content_hash}});
    gateways.push_back({{"name", g.name}, {"catalog", cat}});
  }

  json subscriptions = json::array();
  for (const auto& s : r.subscriptions)
    subscriptions.push_back({{"requester", s.requester},
                             {"name", s.name},
                             {"at_us", s.at_us},
                             {"outcome", s.outcome},
                             {"source", s.source},
                             {"source_hash", s.source_hash},
                             {"stored_hash", s.stored_hash},
                             {"replicated", s.replicated}});

  const auto& f = r.faults;
  json faults = {{"l3_violations", f.l3_violations},
                 {"causality_violations", f.causality_violations},
                 {"unreachable", f.unreachable},
                 {"dropped_unknown", f.dropped_unknown},
                 {"misaddressed", f.misaddressed},
                 {"messages", f.messages}};

  const auto& s = r.summary;
  json summary = {{"throughput_mbps", s.throughput_mbps},
                  {"potential_mbps", s.potential_mbps},
                  {"residual_potential_mbps", s.residual_potential_mbps},
                  {"potential_fraction", s.potential_fraction},
                  {"residual_fraction", s.residual_fraction},
                  {"headline_fraction", s.headline_fraction}};

  return {{"scenario", r.scenario},
          {"scenario_hash", r.scenario_hash},
          {"topology_hash", r.topology_hash},
          {"seed", r.seed},
          {"mode", r.mode},
          {"trace_hash", r.trace_hash},
          {"events", r.events},
          {"end_time_us", r.end_time_us},
          {"horizon_reached", r.horizon_reached},
          {"summary", summary},
          {"sessions", sessions},
          {"allocations", allocations},
          {"links", links},
          {"trees", trees},
          {"per_anchor_tags", tags},
          {"topology", topo},
          {"gateways", gateways},
          {"subscriptions", subscriptions},
          {"faults", faults}};
}

json
parse(std::string_view text, const char* which)
{
  try {
    return json::parse(text);
  }
  catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("report ") + which + ": " + e.what());
  }
}

std::optional<double>
ratio(double num, double den)
{
  if (den == 0)
    return std::nullopt;
  return num / den;
}

std::string
fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string
fmt(const std::optional<double>& v)
{
  return v ? fmt(*v) : std::string("n/a");
}

struct LinkTotals {
  double costly = 0;
  double weighted = 0;
};

LinkTotals
crossings(const json& report, const std::string& costly)
{
  LinkTotals t;
  for (const auto& l : report.at("links")) {
    auto n = l.at("original_data").get<double>();
    t.weighted += n * l.at("cost").get<double>();
    if (l.at("id").get<std::string>() == costly)
      t.costly = n;
  }
  return t;
}

std::map<std::string, double>
last_shares(const json& report)
{
  std::map<std::string, double> out;
  const auto& epochs = report.at("allocations");
  if (!epochs.empty())
    for (const auto& [tag, v] : epochs.back().at("domain_shares").items())
      out[tag] = v.get<double>();
  return out;
}

}  // namespace

std::string
to_json_text(const simnet::RunResult& result)
{
  return to_json(result).dump(2) + "\n";
}

Comparison
compare(std::string_view report_a, std::string_view report_b)
{
  json a = parse(report_a, "a");
  json b = parse(report_b, "b");
  try {
    auto ha = a.at("topology_hash").get<std::string>();
    auto hb = b.at("topology_hash").get<std::string>();
    if (ha != hb)
      throw Error(ErrorCode::TopologyMismatch,
                  "topology " + ha + " (" + a.at("scenario").get<std::string>() + ") vs " + hb +
                    " (" + b.at("scenario").get<std::string>() + ")");

    Comparison c;
    auto ma = a.at("mode").get<std::string>();
    auto mb = b.at("mode").get<std::string>();
    bool flip = ma != mb && ma == "l5";
    c.orientation = ma == mb ? "b/a" : (flip ? "a/b" : "b/a");
    const json& num = flip ? a : b;
    const json& den = flip ? b : a;

    auto headline = [](const json& r) { return r.at("summary").at("headline_fraction").get<double>(); };
    auto raw = [](const json& r) { return r.at("summary").at("throughput_mbps").get<double>(); };
    c.throughput_ratio = ratio(headline(num), headline(den)).value_or(0);
    c.raw_throughput_ratio = ratio(raw(num), raw(den)).value_or(0);

    double best = -1;
    for (const auto& l : a.at("links")) {
      auto cost = l.at("cost").get<double>();
      if (cost > best) {
        best = cost;
        c.costly_link = l.at("id").get<std::string>();
      }
    }
    auto xn = crossings(num, c.costly_link);
    auto xd = crossings(den, c.costly_link);
    c.crossings_ratio = ratio(xn.costly, xd.costly);
    c.weighted_crossings_ratio = ratio(xn.weighted, xd.weighted);

    auto sn = last_shares(num);
    auto sd = last_shares(den);
    for (const auto& [tag, v] : sn)
      c.tag_shares[tag].first = v;
    for (const auto& [tag, v] : sd)
      c.tag_shares[tag].second = v;

    json shares = json::object();
    for (const auto& [tag, v] : c.tag_shares)
      shares[tag] = {{"numerator", v.first}, {"denominator", v.second}};
    json out = {{"scenario", num.at("scenario")},
                {"topology_hash", ha},
                {"numerator", {{"mode", num.at("mode")}, {"seed", num.at("seed")}}},
                {"denominator", {{"mode", den.at("mode")}, {"seed", den.at("seed")}}},
                {"orientation", c.orientation},
                {"throughput_ratio", c.throughput_ratio},
                {"raw_throughput_ratio", c.raw_throughput_ratio},
                {"costly_link", c.costly_link},
                {"crossings_ratio", opt(c.crossings_ratio)},
                {"weighted_crossings_ratio", opt(c.weighted_crossings_ratio)},
                {"tag_shares", shares}};
    c.json = out.dump(2) + "\n";

    std::ostringstream t;
    auto row = [&](const std::string& k, const std::string& n, const std::string& d,
                   const std::string& r) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%-28s %14s %14s %10s\n", k.c_str(), n.c_str(), d.c_str(),
                    r.c_str());
      t << buf;
    };
    row("metric", num.at("mode").get<std::string>(), den.at("mode").get<std::string>(), "ratio");
    row("headline fraction", fmt(headline(num)), fmt(headline(den)), fmt(c.throughput_ratio));
    row("throughput Mbps", fmt(raw(num)), fmt(raw(den)), fmt(c.raw_throughput_ratio));
    row("crossings " + c.costly_link, fmt(xn.costly), fmt(xd.costly), fmt(c.crossings_ratio));
    row("weighted crossings", fmt(xn.weighted), fmt(xd.weighted),
        fmt(c.weighted_crossings_ratio));
    for (const auto& [tag, v] : c.tag_shares)
      row("share " + tag, fmt(v.first), fmt(v.second), fmt(ratio(v.first, v.second)));
    c.table = t.str();
    return c;
  }
  catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report is missing fields: ") + e.what());
  }
}

}  // namespace l5::report
