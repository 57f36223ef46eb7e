#pragma once

// The L5 namespace: named endpoints and named data objects, plus the
// resolver that maps a name onto the L3 locators where it can be reached.
// L3 itself is never touched; a locator is just (domain, attachment).

#include "l5/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace l5 {

enum class AddressKind : std::uint8_t { Endpoint, Data };

inline constexpr std::size_t max_address_length = 255;
inline constexpr std::size_t max_tag_length = 32;

/// Hierarchical dotted name. Two addresses are equal iff their canonical
/// strings are byte-equal; the kind travels with the value but takes no part
/// in comparison (endpoints and data share one namespace).
class L5Address {
 public:
  L5Address() = default;

  const std::vector<std::string>& labels() const noexcept { return m_labels; }
  AddressKind kind() const noexcept { return m_kind; }
  const std::string& str() const noexcept { return m_canonical; }

  bool is_data() const noexcept { return m_kind == AddressKind::Data; }

  friend bool operator==(const L5Address& a, const L5Address& b) noexcept
  {
    return a.m_canonical == b.m_canonical;
  }
  friend std::strong_ordering operator<=>(const L5Address& a, const L5Address& b) noexcept
  {
    return a.m_canonical <=> b.m_canonical;
  }

 private:
  friend L5Address parse_address(std::string_view, AddressKind);

  std::vector<std::string> m_labels;
  std::string m_canonical;
  AddressKind m_kind = AddressKind::Endpoint;
};

/// Parses "label(.label)*". ASCII upper case folds to lower case; anything
/// else outside [a-z0-9-] is rejected. Throws Error{EmptyLabel,
/// IllegalCharacter, TooLong}; the message names the offending label.
L5Address parse_address(std::string_view text, AddressKind kind = AddressKind::Endpoint);

inline L5Address
data_name(std::string_view text)
{
  return parse_address(text, AddressKind::Data);
}

std::string format_address(const L5Address& addr);

struct L3Locator {
  std::string domain_id;
  std::string attachment_id;

  friend auto operator<=>(const L3Locator&, const L3Locator&) = default;
  std::string str() const { return domain_id + "/" + attachment_id; }
};

struct ScienceDomainTag {
  std::string tag;
  Rational weight{1};
};

/// Throws Error{InvalidTag} on an empty or over-long tag, non-positive weight,
/// or a duplicate tag.
void validate_policy(const std::vector<ScienceDomainTag>& policy);

/// Versioned name → locator table. Updates return a fresh table; the
/// receiver is never modified, so a table can be shared read-only.
class ResolverTable {
 public:
  ResolverTable() = default;
  /// `universe` is the set of locators that exist in the scenario.
  explicit ResolverTable(std::set<L3Locator> universe);

  /// Throws Error{UnknownLocator} if `loc` is not in the universe. The version
  /// advances by exactly one even when the pair was already present.
  [[nodiscard]] ResolverTable registered(const L5Address& addr, const L3Locator& loc) const;
  [[nodiscard]] ResolverTable unregistered(const L5Address& addr, const L3Locator& loc) const;

  /// Data names with no entry resolve to the empty set; endpoint names with
  /// no locator throw Error{UnknownEndpoint}.
  std::set<L3Locator> resolve(const L5Address& addr) const;

  std::uint64_t version() const noexcept { return m_version; }
  const std::set<L3Locator>& universe() const noexcept { return m_universe; }
  std::size_t size() const noexcept { return m_entries.size(); }

 private:
  std::set<L3Locator> m_universe;
  std::map<L5Address, std::set<L3Locator>> m_entries;
  std::uint64_t m_version = 0;
};

inline ResolverTable
register_locator(const ResolverTable& table, const L5Address& addr, const L3Locator& loc)
{
  return table.registered(addr, loc);
}

inline std::set<L3Locator>
resolve(const ResolverTable& table, const L5Address& addr)
{
  return table.resolve(addr);
}

}  // namespace l5
