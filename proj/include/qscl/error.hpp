#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qscl {

enum class Errc {
  Dimension,
  Modulus,
  InvalidParameter,
  DuplicateRegistration,
  UnregisteredVehicle,
  InvalidPartialKey,
  UnknownPseudonym,
  EmptyBatch,
  EncodingRange,
  TruncatedMessage,
  MalformedElement,
  TrailingBytes,
  BadFormat,
  Scenario,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::Dimension: return "DimensionError";
    case Errc::Modulus: return "ModulusError";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::DuplicateRegistration: return "DuplicateRegistration";
    case Errc::UnregisteredVehicle: return "UnregisteredVehicle";
    case Errc::InvalidPartialKey: return "InvalidPartialKey";
    case Errc::UnknownPseudonym: return "UnknownPseudonym";
    case Errc::EmptyBatch: return "EmptyBatch";
    case Errc::EncodingRange: return "EncodingRangeError";
    case Errc::TruncatedMessage: return "TruncatedMessage";
    case Errc::MalformedElement: return "MalformedElement";
    case Errc::TrailingBytes: return "TrailingBytes";
    case Errc::BadFormat: return "BadFormat";
    case Errc::Scenario: return "ScenarioError";
  }
  return "Unknown";
}

// All library failures are reported through this one exception type; callers
// branch on code() rather than on a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qscl
