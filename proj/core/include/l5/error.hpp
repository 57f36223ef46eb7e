#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace l5 {

enum class ErrorCode {
  // addressing
  EmptyLabel,
  IllegalCharacter,
  TooLong,
  UnknownEndpoint,
  UnknownLocator,
  InvalidTag,
  // pathfinder / anchor
  NotOnPath,
  NotAdjacent,
  // allocator
  UnknownLink,
  UnknownTag,
  InvalidDemand,
  // session
  NoPaths,
  MissingRate,
  SessionMismatch,
  // gateway / pubsub
  NotDataName,
  ObjectUnavailable,
  Unreachable,
  // simnet
  EmptyQueue,
  CausalityViolation,
  // scenario / cli
  ConfigInvalid,
  ParseError,
  TopologyMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what)
    , m_code(code)
  {
  }

  ErrorCode code() const noexcept { return m_code; }

 private:
  ErrorCode m_code;
};

}  // namespace l5
