#include "l5/addressing.hpp"

#include "l5/error.hpp"

#include <set>

namespace l5 {

namespace {

bool
legal_label_char(char c) noexcept
{
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

}  // namespace

L5Address
parse_address(std::string_view text, AddressKind kind)
{
  if (text.size() > max_address_length)
    throw Error(ErrorCode::TooLong, "name of " + std::to_string(text.size()) +
                                        " bytes exceeds " + std::to_string(max_address_length));

  L5Address addr;
  addr.m_kind = kind;
  std::size_t start = 0;
  std::size_t index = 0;
  while (true) {
    auto dot = text.find('.', start);
    auto piece = text.substr(start, dot == std::string_view::npos ? std::string_view::npos
                                                                   : dot - start);
    if (piece.empty())
      throw Error(ErrorCode::EmptyLabel, "label " + std::to_string(index) + " of '" +
                                             std::string(text) + "' is empty");
    std::string label;
    label.reserve(piece.size());
    for (char c : piece) {
      if (c >= 'A' && c <= 'Z')
        c = static_cast<char>(c - 'A' + 'a');
      if (!legal_label_char(c))
        throw Error(ErrorCode::IllegalCharacter, "label " + std::to_string(index) + " '" +
                                                     std::string(piece) + "' contains '" +
                                                     std::string(1, c) + "'");
      label.push_back(c);
    }
    addr.m_labels.push_back(std::move(label));
    if (dot == std::string_view::npos)
      break;
    start = dot + 1;
    ++index;
  }

  for (std::size_t i = 0; i < addr.m_labels.size(); ++i) {
    if (i)
      addr.m_canonical.push_back('.');
    addr.m_canonical += addr.m_labels[i];
  }
  return addr;
}

std::string
format_address(const L5Address& addr)
{
  return addr.str();
}

void
validate_policy(const std::vector<ScienceDomainTag>& policy)
{
  std::set<std::string> seen;
  for (const auto& entry : policy) {
    if (entry.tag.empty() || entry.tag.size() > max_tag_length)
      throw Error(ErrorCode::InvalidTag, "tag '" + entry.tag + "' must be 1.." +
                                             std::to_string(max_tag_length) + " bytes");
    if (entry.weight <= 0)
      throw Error(ErrorCode::InvalidTag, "tag '" + entry.tag + "' has non-positive weight");
    if (!seen.insert(entry.tag).second)
      throw Error(ErrorCode::InvalidTag, "duplicate tag '" + entry.tag + "'");
  }
}

ResolverTable::ResolverTable(std::set<L3Locator> universe)
  : m_universe(std::move(universe))
{
}

ResolverTable
ResolverTable::registered(const L5Address& addr, const L3Locator& loc) const
{
  if (!m_universe.contains(loc))
    throw Error(ErrorCode::UnknownLocator, "locator " + loc.str() + " is not part of the scenario");
  ResolverTable next = *this;
  next.m_entries[addr].insert(loc);
  ++next.m_version;
  return next;
}

ResolverTable
ResolverTable::unregistered(const L5Address& addr, const L3Locator& loc) const
{
  ResolverTable next = *this;
  if (auto it = next.m_entries.find(addr); it != next.m_entries.end()) {
    it->second.erase(loc);
    if (it->second.empty())
      next.m_entries.erase(it);
  }
  ++next.m_version;
  return next;
}

std::set<L3Locator>
ResolverTable::resolve(const L5Address& addr) const
{
  auto it = m_entries.find(addr);
  if (it == m_entries.end() || it->second.empty()) {
    if (addr.kind() == AddressKind::Endpoint)
      throw Error(ErrorCode::UnknownEndpoint, "no locator for endpoint '" + addr.str() + "'");
    return {};
  }
  return it->second;
}

}  // namespace l5
