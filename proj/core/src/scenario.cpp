#include "l5/scenario.hpp"

#include "l5/error.hpp"
#include "l5/wire.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace l5::scenario {

using nlohmann::json;

std::string_view
to_string(Mode mode) noexcept
{
  return mode == Mode::Baseline ? "baseline" : "l5";
}

std::optional<Mode>
parse_mode(std::string_view text) noexcept
{
  if (text == "baseline")
    return Mode::Baseline;
  if (text == "l5")
    return Mode::L5;
  return std::nullopt;
}

std::string_view
action_name(const Action& action) noexcept
{
  static constexpr std::string_view names[] = {"open_session", "publish", "subscribe",
                                               "join",         "stage",   "link_down"};
  return names[action.index()];
}

namespace {

class Reader {
 public:
  std::vector<Diagnostic> diags;

  void fail(const std::string& path, const std::string& message) { diags.push_back({path, message}); }

  const json* field(const json& obj, const std::string& path, const char* key, bool required)
  {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required)
        fail(join(path, key), "required field is missing");
      return nullptr;
    }
    return &*it;
  }

  static std::string join(const std::string& path, const char* key)
  {
    return path.empty() ? std::string(key) : path + "." + key;
  }

  std::optional<std::string> str(const json& obj, const std::string& path, const char* key,
                                 bool required = true)
  {
    const json* v = field(obj, path, key, required);
    if (!v)
      return std::nullopt;
    if (!v->is_string()) {
      fail(join(path, key), "expected a string");
      return std::nullopt;
    }
    auto s = v->get<std::string>();
    if (s.empty()) {
      fail(join(path, key), "must not be empty");
      return std::nullopt;
    }
    return s;
  }

  std::optional<std::uint64_t> uint(const json& obj, const std::string& path, const char* key,
                                    bool required = true)
  {
    const json* v = field(obj, path, key, required);
    if (!v)
      return std::nullopt;
    if (v->is_number_unsigned())
      return v->get<std::uint64_t>();
    if (v->is_number_integer())
      fail(join(path, key), "must be >= 0");
    else
      fail(join(path, key), "expected a non-negative integer");
    return std::nullopt;
  }

  std::optional<double> number(const json& obj, const std::string& path, const char* key,
                               bool required = true)
  {
    const json* v = field(obj, path, key, required);
    if (!v)
      return std::nullopt;
    if (!v->is_number()) {
      fail(join(path, key), "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<bool> boolean(const json& obj, const std::string& path, const char* key)
  {
    const json* v = field(obj, path, key, false);
    if (!v)
      return std::nullopt;
    if (!v->is_boolean()) {
      fail(join(path, key), "expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  const json* array(const json& obj, const std::string& path, const char* key, bool required)
  {
    const json* v = field(obj, path, key, required);
    if (!v)
      return nullptr;
    if (!v->is_array()) {
      fail(join(path, key), "expected an array");
      return nullptr;
    }
    return v;
  }

  bool object(const json& v, const std::string& path)
  {
    if (!v.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    return true;
  }

  std::vector<std::string> strings(const json& obj, const std::string& path, const char* key,
                                   bool required)
  {
    std::vector<std::string> out;
    const json* arr = array(obj, path, key, required);
    if (!arr)
      return out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      auto p = join(path, key) + "[" + std::to_string(i) + "]";
      if (!v.is_string() || v.get<std::string>().empty())
        fail(p, "expected a non-empty string");
      else
        out.push_back(v.get<std::string>());
    }
    return out;
  }

  void name(const std::string& path, const std::string& text, AddressKind kind)
  {
    try {
      (void)parse_address(text, kind);
    }
    catch (const Error& e) {
      fail(path, e.what());
    }
  }
};

std::string
indexed(const char* key, std::size_t i)
{
  return std::string(key) + "[" + std::to_string(i) + "]";
}

/// Canonical form of an L5 name, or the raw text if it does not parse (the
/// diagnostic is reported elsewhere).
std::string
canonical(const std::string& text)
{
  try {
    return parse_address(text).str();
  }
  catch (const Error&) {
    return text;
  }
}

Action
read_action(Reader& r, const json& ev, const std::string& p, const std::string& type)
{
  if (type == "open_session") {
    OpenSession a;
    a.id = r.str(ev, p, "id").value_or("");
    a.src = r.str(ev, p, "src").value_or("");
    a.dst = r.str(ev, p, "dst").value_or("");
    a.tag = r.str(ev, p, "tag").value_or("");
    a.bytes = r.uint(ev, p, "bytes").value_or(0);
    a.demand_cap_mbps = r.number(ev, p, "demand_cap_mbps", false);
    return a;
  }
  if (type == "publish") {
    Publish a;
    a.id = r.str(ev, p, "id").value_or("");
    a.publisher = r.str(ev, p, "publisher").value_or("");
    a.subscribers = r.strings(ev, p, "subscribers", true);
    a.tag = r.str(ev, p, "tag").value_or("");
    a.bytes = r.uint(ev, p, "bytes").value_or(0);
    a.name = r.str(ev, p, "name", false);
    return a;
  }
  if (type == "subscribe") {
    Subscribe a;
    a.requester = r.str(ev, p, "requester").value_or("");
    a.name = r.str(ev, p, "name").value_or("");
    a.tag = r.str(ev, p, "tag").value_or("");
    return a;
  }
  if (type == "join") {
    Join a;
    a.tree = r.str(ev, p, "tree").value_or("");
    a.subscriber = r.str(ev, p, "subscriber").value_or("");
    return a;
  }
  if (type == "stage") {
    Stage a;
    a.gateway = r.str(ev, p, "gateway").value_or("");
    a.name = r.str(ev, p, "name").value_or("");
    a.bytes = r.uint(ev, p, "bytes").value_or(0);
    a.ttl_us = r.uint(ev, p, "ttl_us").value_or(0);
    return a;
  }
  LinkDown a;
  a.link = r.str(ev, p, "link").value_or("");
  return a;
}

ScenarioConfig
read(Reader& r, const json& doc)
{
  ScenarioConfig c;
  if (!r.object(doc, "$"))
    return c;
  c.name = r.str(doc, "", "name").value_or("");
  c.seed = r.uint(doc, "", "seed", false).value_or(0);
  if (auto m = r.str(doc, "", "mode", false)) {
    if (auto mode = parse_mode(*m))
      c.mode = *mode;
    else
      r.fail("mode", "must be \"baseline\" or \"l5\"");
  }
  c.horizon_us = r.uint(doc, "", "horizon_us", false).value_or(0);
  if (auto k = r.uint(doc, "", "k_paths", false)) {
    if (*k == 0 || *k > 16)
      r.fail("k_paths", "must be in 1..16");
    else
      c.k_paths = static_cast<std::uint32_t>(*k);
  }

  if (const json* arr = r.array(doc, "", "domains", true)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      auto p = indexed("domains", i);
      if (!r.object((*arr)[i], p))
        continue;
      DomainConfig d;
      d.id = r.str((*arr)[i], p, "id").value_or("");
      d.attachments = r.strings((*arr)[i], p, "attachments", true);
      c.domains.push_back(std::move(d));
    }
  }
  if (const json* arr = r.array(doc, "", "links", true)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      auto p = indexed("links", i);
      const auto& v = (*arr)[i];
      if (!r.object(v, p))
        continue;
      LinkConfig l;
      l.id = r.str(v, p, "id").value_or("");
      l.domain = r.str(v, p, "domain").value_or("");
      l.a = r.str(v, p, "a").value_or("");
      l.b = r.str(v, p, "b").value_or("");
      l.capacity_mbps = r.number(v, p, "capacity_mbps").value_or(0);
      l.latency_us = r.uint(v, p, "latency_us").value_or(0);
      l.loss_prob = r.number(v, p, "loss_prob", false).value_or(0);
      l.background_utilization = r.number(v, p, "background_utilization", false).value_or(0);
      l.cost = r.number(v, p, "cost", false);
      c.links.push_back(std::move(l));
    }
  }
  if (const json* arr = r.array(doc, "", "anchors", true)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      auto p = indexed("anchors", i);
      const auto& v = (*arr)[i];
      if (!r.object(v, p))
        continue;
      AnchorConfig a;
      a.name = canonical(r.str(v, p, "name").value_or(""));
      if (const json* ports = r.array(v, p, "ports", true)) {
        for (std::size_t j = 0; j < ports->size(); ++j) {
          auto pp = p + "." + indexed("ports", j);
          if (!r.object((*ports)[j], pp))
            continue;
          L3Locator loc;
          loc.domain_id = r.str((*ports)[j], pp, "domain").value_or("");
          loc.attachment_id = r.str((*ports)[j], pp, "attachment").value_or("");
          a.ports.push_back(std::move(loc));
        }
      }
      for (auto& peer : r.strings(v, p, "peers", false))
        a.peers.push_back(canonical(peer));
      a.gateway = r.boolean(v, p, "gateway").value_or(false);
      c.anchors.push_back(std::move(a));
    }
  }
  if (const json* arr = r.array(doc, "", "hosts", false)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      auto p = indexed("hosts", i);
      const auto& v = (*arr)[i];
      if (!r.object(v, p))
        continue;
      HostConfig h;
      h.name = canonical(r.str(v, p, "name").value_or(""));
      if (const json* loc = r.field(v, p, "locator", true); loc && r.object(*loc, p + ".locator")) {
        h.locator.domain_id = r.str(*loc, p + ".locator", "domain").value_or("");
        h.locator.attachment_id = r.str(*loc, p + ".locator", "attachment").value_or("");
      }
      h.home_anchor = canonical(r.str(v, p, "home_anchor").value_or(""));
      c.hosts.push_back(std::move(h));
    }
  }
  if (const json* arr = r.array(doc, "", "policy", false)) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      auto p = indexed("policy", i);
      const auto& v = (*arr)[i];
      if (!r.object(v, p))
        continue;
      PolicyEntry e;
      e.tag = r.str(v, p, "tag").value_or("");
      e.weight = r.number(v, p, "weight", false).value_or(1);
      c.policy.push_back(std::move(e));
    }
  }
  if (const json* arr = r.array(doc, "", "events", false)) {
    static const std::set<std::string> types{"open_session", "publish", "subscribe",
                                             "join",         "stage",   "link_down"};
    for (std::size_t i = 0; i < arr->size(); ++i) {
      auto p = indexed("events", i);
      const auto& v = (*arr)[i];
      if (!r.object(v, p))
        continue;
      auto type = r.str(v, p, "type");
      if (!type)
        continue;
      if (!types.contains(*type)) {
        r.fail(p + ".type", "unknown event type '" + *type + "'");
        continue;
      }
      EventConfig e;
      e.at_us = r.uint(v, p, "at_us").value_or(0);
      e.action = read_action(r, v, p, *type);
      c.events.push_back(std::move(e));
    }
  }
  return c;
}

void
check(Reader& r, const ScenarioConfig& c)
{
  // domains and attachments
  std::map<std::string, std::set<std::string>> attachments;
  for (std::size_t i = 0; i < c.domains.size(); ++i) {
    const auto& d = c.domains[i];
    auto p = indexed("domains", i);
    if (d.id.empty())
      continue;
    if (attachments.contains(d.id)) {
      r.fail(p + ".id", "duplicate domain '" + d.id + "'");
      continue;
    }
    auto& set = attachments[d.id];
    for (std::size_t j = 0; j < d.attachments.size(); ++j)
      if (!set.insert(d.attachments[j]).second)
        r.fail(p + "." + indexed("attachments", j),
               "duplicate attachment '" + d.attachments[j] + "'");
  }
  auto locator_ok = [&](const L3Locator& loc) {
    auto it = attachments.find(loc.domain_id);
    return it != attachments.end() && it->second.contains(loc.attachment_id);
  };

  // links; union-find per domain for reachability checks below
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x)
      return x;
    return it->second = find(it->second);
  };
  auto key = [](const std::string& dom, const std::string& att) { return dom + "/" + att; };

  std::set<std::string> link_ids;
  for (std::size_t i = 0; i < c.links.size(); ++i) {
    const auto& l = c.links[i];
    auto p = indexed("links", i);
    if (!l.id.empty() && !link_ids.insert(l.id).second)
      r.fail(p + ".id", "duplicate link '" + l.id + "'");
    auto dom = attachments.find(l.domain);
    if (!l.domain.empty() && dom == attachments.end())
      r.fail(p + ".domain", "unknown domain '" + l.domain + "'");
    if (dom != attachments.end()) {
      if (!l.a.empty() && !dom->second.contains(l.a))
        r.fail(p + ".a", "unknown attachment '" + l.a + "' in domain '" + l.domain + "'");
      if (!l.b.empty() && !dom->second.contains(l.b))
        r.fail(p + ".b", "unknown attachment '" + l.b + "' in domain '" + l.domain + "'");
      if (dom->second.contains(l.a) && dom->second.contains(l.b))
        parent[find(key(l.domain, l.a))] = find(key(l.domain, l.b));
    }
    if (!l.a.empty() && l.a == l.b)
      r.fail(p + ".b", "a link needs two distinct attachments");
    if (!(l.capacity_mbps > 0))
      r.fail(p + ".capacity_mbps", "must be > 0");
    if (!(l.loss_prob >= 0 && l.loss_prob < 1))
      r.fail(p + ".loss_prob", "must be in [0, 1)");
    if (!(l.background_utilization >= 0 && l.background_utilization < 1))
      r.fail(p + ".background_utilization", "must be in [0, 1)");
    if (l.cost && !(*l.cost >= 0))
      r.fail(p + ".cost", "must be >= 0");
  }
  auto connected = [&](const L3Locator& x, const L3Locator& y) {
    return x.domain_id == y.domain_id &&
           find(key(x.domain_id, x.attachment_id)) == find(key(y.domain_id, y.attachment_id));
  };

  // nodes
  std::map<std::string, const AnchorConfig*> anchors;
  std::map<std::string, const HostConfig*> hosts;
  std::set<std::string> gateways;
  std::map<L3Locator, std::string> owner;
  auto claim = [&](const L3Locator& loc, const std::string& who, const std::string& path) {
    if (!locator_ok(loc)) {
      r.fail(path, "unknown locator '" + loc.str() + "'");
      return;
    }
    auto [it, fresh] = owner.emplace(loc, who);
    if (!fresh)
      r.fail(path, "locator '" + loc.str() + "' already belongs to '" + it->second + "'");
  };

  for (std::size_t i = 0; i < c.anchors.size(); ++i) {
    const auto& a = c.anchors[i];
    auto p = indexed("anchors", i);
    if (a.name.empty())
      continue;
    r.name(p + ".name", a.name, AddressKind::Endpoint);
    if (!anchors.emplace(a.name, &a).second)
      r.fail(p + ".name", "duplicate anchor '" + a.name + "'");
    if (a.ports.empty())
      r.fail(p + ".ports", "an anchor needs at least one port");
    std::set<std::string> port_domains;
    for (std::size_t j = 0; j < a.ports.size(); ++j) {
      claim(a.ports[j], a.name, p + "." + indexed("ports", j));
      if (!port_domains.insert(a.ports[j].domain_id).second)
        r.fail(p + "." + indexed("ports", j), "at most one port per domain");
    }
    if (a.gateway)
      gateways.insert(a.name);
  }
  for (std::size_t i = 0; i < c.hosts.size(); ++i) {
    const auto& h = c.hosts[i];
    auto p = indexed("hosts", i);
    if (h.name.empty())
      continue;
    r.name(p + ".name", h.name, AddressKind::Endpoint);
    if (anchors.contains(h.name) || !hosts.emplace(h.name, &h).second)
      r.fail(p + ".name", "duplicate node name '" + h.name + "'");
    claim(h.locator, h.name, p + ".locator");
  }

  auto reachable_pair = [&](const AnchorConfig& x, const std::vector<L3Locator>& ports) {
    for (const auto& px : x.ports)
      for (const auto& py : ports)
        if (locator_ok(px) && locator_ok(py) && connected(px, py))
          return true;
    return false;
  };

  for (std::size_t i = 0; i < c.anchors.size(); ++i) {
    const auto& a = c.anchors[i];
    auto p = indexed("anchors", i);
    std::set<std::string> seen;
    for (std::size_t j = 0; j < a.peers.size(); ++j) {
      auto pp = p + "." + indexed("peers", j);
      const auto& peer = a.peers[j];
      auto it = anchors.find(peer);
      if (it == anchors.end())
        r.fail(pp, "unknown anchor '" + peer + "'");
      else if (peer == a.name)
        r.fail(pp, "an anchor cannot peer with itself");
      else if (!seen.insert(peer).second)
        r.fail(pp, "duplicate peer '" + peer + "'");
      else if (!reachable_pair(a, it->second->ports))
        r.fail(pp, "no L3 route between '" + a.name + "' and '" + peer + "' in a shared domain");
    }
  }
  for (std::size_t i = 0; i < c.hosts.size(); ++i) {
    const auto& h = c.hosts[i];
    auto p = indexed("hosts", i);
    auto it = anchors.find(h.home_anchor);
    if (h.home_anchor.empty())
      continue;
    if (it == anchors.end())
      r.fail(p + ".home_anchor", "unknown anchor '" + h.home_anchor + "'");
    else if (!reachable_pair(*it->second, {h.locator}))
      r.fail(p + ".home_anchor",
             "'" + h.home_anchor + "' has no L3 route to '" + h.locator.str() + "'");
  }

  // policy
  std::set<std::string> tags;
  for (std::size_t i = 0; i < c.policy.size(); ++i) {
    const auto& e = c.policy[i];
    auto p = indexed("policy", i);
    if (e.tag.size() > max_tag_length)
      r.fail(p + ".tag", "longer than " + std::to_string(max_tag_length) + " characters");
    if (!e.tag.empty() && !tags.insert(e.tag).second)
      r.fail(p + ".tag", "duplicate tag '" + e.tag + "'");
    if (!(e.weight > 0))
      r.fail(p + ".weight", "must be > 0");
  }

  // events
  auto node_exists = [&](const std::string& n) {
    return anchors.contains(canonical(n)) || hosts.contains(canonical(n));
  };
  std::set<std::string> stream_ids;
  std::map<std::string, std::uint64_t> trees;
  for (std::size_t i = 0; i < c.events.size(); ++i) {
    const auto& e = c.events[i];
    auto p = indexed("events", i);
    auto need_node = [&](const std::string& field, const std::string& n) {
      if (!n.empty() && !node_exists(n))
        r.fail(p + "." + field, "unknown node '" + n + "'");
    };
    auto need_tag = [&](const std::string& tag) {
      if (!tag.empty() && !tags.contains(tag))
        r.fail(p + ".tag", "tag '" + tag + "' is not in the policy");
    };
    auto need_gateway = [&](const std::string& field, const std::string& n) {
      if (!n.empty() && !gateways.contains(canonical(n)))
        r.fail(p + "." + field, "'" + n + "' is not a gateway anchor");
    };
    auto need_bytes = [&](std::uint64_t b) {
      if (b == 0)
        r.fail(p + ".bytes", "must be > 0");
    };
    auto need_id = [&](const std::string& id) {
      if (!id.empty() && !stream_ids.insert(id).second)
        r.fail(p + ".id", "duplicate session id '" + id + "'");
    };

    std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, OpenSession>) {
          need_id(a.id);
          need_node("src", a.src);
          need_node("dst", a.dst);
          if (!a.src.empty() && canonical(a.src) == canonical(a.dst))
            r.fail(p + ".dst", "source and destination are the same node");
          need_tag(a.tag);
          need_bytes(a.bytes);
          if (a.demand_cap_mbps && !(*a.demand_cap_mbps > 0))
            r.fail(p + ".demand_cap_mbps", "must be > 0");
        }
        else if constexpr (std::is_same_v<T, Publish>) {
          need_id(a.id);
          if (!a.id.empty())
            trees[a.id] = e.at_us;
          need_node("publisher", a.publisher);
          if (a.subscribers.empty())
            r.fail(p + ".subscribers", "at least one subscriber is required");
          std::set<std::string> subs;
          for (std::size_t j = 0; j < a.subscribers.size(); ++j) {
            auto sp = p + "." + indexed("subscribers", j);
            if (!node_exists(a.subscribers[j]))
              r.fail(sp, "unknown node '" + a.subscribers[j] + "'");
            else if (!subs.insert(canonical(a.subscribers[j])).second)
              r.fail(sp, "duplicate subscriber");
            else if (canonical(a.subscribers[j]) == canonical(a.publisher))
              r.fail(sp, "the publisher cannot subscribe to itself");
          }
          need_tag(a.tag);
          need_bytes(a.bytes);
          if (a.name)
            r.name(p + ".name", *a.name, AddressKind::Data);
        }
        else if constexpr (std::is_same_v<T, Subscribe>) {
          need_gateway("requester", a.requester);
          if (!a.name.empty())
            r.name(p + ".name", a.name, AddressKind::Data);
          need_tag(a.tag);
        }
        else if constexpr (std::is_same_v<T, Join>) {
          auto it = trees.find(a.tree);
          if (!a.tree.empty() && it == trees.end())
            r.fail(p + ".tree", "no earlier publish with id '" + a.tree + "'");
          else if (it != trees.end() && e.at_us < it->second)
            r.fail(p + ".at_us", "join precedes its publish");
          need_node("subscriber", a.subscriber);
        }
        else if constexpr (std::is_same_v<T, Stage>) {
          need_gateway("gateway", a.gateway);
          if (!a.name.empty())
            r.name(p + ".name", a.name, AddressKind::Data);
          need_bytes(a.bytes);
        }
        else {
          if (!a.link.empty() && !link_ids.contains(a.link))
            r.fail(p + ".link", "unknown link '" + a.link + "'");
        }
      },
      e.action);
  }
}

std::pair<std::size_t, std::size_t>
line_column(std::string_view text, std::size_t byte)
{
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    }
    else {
      ++col;
    }
  }
  return {line, col};
}

json
locator_json(const L3Locator& loc)
{
  return {{"domain", loc.domain_id}, {"attachment", loc.attachment_id}};
}

json
action_json(const Action& action)
{
  json j;
  j["type"] = action_name(action);
  std::visit(
    [&](const auto& a) {
      using T = std::decay_t<decltype(a)>;
      if constexpr (std::is_same_v<T, OpenSession>) {
        j["id"] = a.id;
        j["src"] = a.src;
        j["dst"] = a.dst;
        j["tag"] = a.tag;
        j["bytes"] = a.bytes;
        if (a.demand_cap_mbps)
          j["demand_cap_mbps"] = *a.demand_cap_mbps;
      }
      else if constexpr (std::is_same_v<T, Publish>) {
        j["id"] = a.id;
        j["publisher"] = a.publisher;
        j["subscribers"] = a.subscribers;
        j["tag"] = a.tag;
        j["bytes"] = a.bytes;
        if (a.name)
          j["name"] = *a.name;
      }
      else if constexpr (std::is_same_v<T, Subscribe>) {
        j["requester"] = a.requester;
        j["name"] = a.name;
        j["tag"] = a.tag;
      }
      else if constexpr (std::is_same_v<T, Join>) {
        j["tree"] = a.tree;
        j["subscriber"] = a.subscriber;
      }
      else if constexpr (std::is_same_v<T, Stage>) {
        j["gateway"] = a.gateway;
        j["name"] = a.name;
        j["bytes"] = a.bytes;
        j["ttl_us"] = a.ttl_us;
      }
      else {
        j["link"] = a.link;
      }
    },
    action);
  return j;
}

json
topology_json(const ScenarioConfig& c)
{
  json doms = json::array();
  for (const auto& d : c.domains)
    doms.push_back({{"id", d.id}, {"attachments", d.attachments}});
  json links = json::array();
  for (const auto& l : c.links) {
    json j{{"id", l.id},
           {"domain", l.domain},
           {"a", l.a},
           {"b", l.b},
           {"capacity_mbps", l.capacity_mbps},
           {"latency_us", l.latency_us},
           {"loss_prob", l.loss_prob},
           {"background_utilization", l.background_utilization}};
    if (l.cost)
      j["cost"] = *l.cost;
    links.push_back(std::move(j));
  }
  json anchors = json::array();
  for (const auto& a : c.anchors) {
    json ports = json::array();
    for (const auto& p : a.ports)
      ports.push_back(locator_json(p));
    anchors.push_back({{"name", a.name}, {"ports", ports}, {"peers", a.peers}, {"gateway", a.gateway}});
  }
  json hosts = json::array();
  for (const auto& h : c.hosts)
    hosts.push_back(
      {{"name", h.name}, {"locator", locator_json(h.locator)}, {"home_anchor", h.home_anchor}});
  return {{"domains", doms}, {"links", links}, {"anchors", anchors}, {"hosts", hosts}};
}

json
config_json(const ScenarioConfig& c, bool with_run_parameters)
{
  json j = topology_json(c);
  j["name"] = c.name;
  j["horizon_us"] = c.horizon_us;
  j["k_paths"] = c.k_paths;
  json policy = json::array();
  for (const auto& e : c.policy)
    policy.push_back({{"tag", e.tag}, {"weight", e.weight}});
  j["policy"] = policy;
  json events = json::array();
  for (const auto& e : c.events) {
    json ev = action_json(e.action);
    ev["at_us"] = e.at_us;
    events.push_back(std::move(ev));
  }
  j["events"] = events;
  if (with_run_parameters) {
    j["seed"] = c.seed;
    j["mode"] = to_string(c.mode);
  }
  return j;
}

std::string
read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::ConfigInvalid, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Validation
validate_text(std::string_view text)
{
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  }
  catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    // drop nlohmann's "[json.exception.parse_error.101] parse error at ...: " prefix
    if (auto pos = what.find(": "); pos != std::string::npos)
      what = what.substr(pos + 2);
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
  }

  Reader r;
  ScenarioConfig config = read(r, doc);
  if (r.diags.empty() || doc.is_object())
    check(r, config);
  Validation v;
  v.diagnostics = std::move(r.diags);
  if (v.diagnostics.empty())
    v.config = std::move(config);
  return v;
}

Validation
validate_file(const std::string& path)
{
  return validate_text(read_file(path));
}

ScenarioConfig
load_text(std::string_view text)
{
  auto v = validate_text(text);
  if (!v.config) {
    std::string msg = std::to_string(v.diagnostics.size()) + " problem(s):";
    for (const auto& d : v.diagnostics)
      msg += "\n  " + d.path + ": " + d.message;
    throw Error(ErrorCode::ConfigInvalid, msg);
  }
  return std::move(*v.config);
}

ScenarioConfig
load_file(const std::string& path)
{
  return load_text(read_file(path));
}

std::string
to_json_text(const ScenarioConfig& config)
{
  return config_json(config, true).dump(2);
}

std::uint64_t
scenario_hash(const ScenarioConfig& config)
{
  return wire::fnv1a64(config_json(config, false).dump());
}

std::uint64_t
topology_hash(const ScenarioConfig& config)
{
  return wire::fnv1a64(topology_json(config).dump());
}

}  // namespace l5::scenario
