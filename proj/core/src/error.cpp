#include "l5/error.hpp"

namespace l5 {

std::string_view
to_string(ErrorCode code) noexcept
{
  switch (code) {
    case ErrorCode::EmptyLabel: return "EmptyLabel";
    case ErrorCode::IllegalCharacter: return "IllegalCharacter";
    case ErrorCode::TooLong: return "TooLong";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::UnknownLocator: return "UnknownLocator";
    case ErrorCode::InvalidTag: return "InvalidTag";
    case ErrorCode::NotOnPath: return "NotOnPath";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::UnknownLink: return "UnknownLink";
    case ErrorCode::UnknownTag: return "UnknownTag";
    case ErrorCode::InvalidDemand: return "InvalidDemand";
    case ErrorCode::NoPaths: return "NoPaths";
    case ErrorCode::MissingRate: return "MissingRate";
    case ErrorCode::SessionMismatch: return "SessionMismatch";
    case ErrorCode::NotDataName: return "NotDataName";
    case ErrorCode::ObjectUnavailable: return "ObjectUnavailable";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::EmptyQueue: return "EmptyQueue";
    case ErrorCode::CausalityViolation: return "CausalityViolation";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TopologyMismatch: return "TopologyMismatch";
  }
  return "Unknown";
}

}  // namespace l5
