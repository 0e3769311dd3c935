#pragma once

#include <stdexcept>
#include <string>

namespace itmsim {

// Conditions that abort an API call. In-run protocol conditions (packet
// drops, rejected log submissions, expired agent windows, unreachable
// consoles) are recorded as counters or flags and never unwind the event
// loop.
enum class Errc {
  EngineFinished,
  InvalidArgument,
  DuplicateNodeId,
  DanglingLink,
  AddressCollision,
  UnknownOrigin,
  NoBots,
  ChannelDown,
  UnknownMonitor,
  UnknownParameter,
  ParseError,
  ValidationError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EngineFinished: return "EngineFinished";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DuplicateNodeId: return "DuplicateNodeId";
    case Errc::DanglingLink: return "DanglingLink";
    case Errc::AddressCollision: return "AddressCollision";
    case Errc::UnknownOrigin: return "UnknownOrigin";
    case Errc::NoBots: return "NoBots";
    case Errc::ChannelDown: return "ChannelDown";
    case Errc::UnknownMonitor: return "UnknownMonitor";
    case Errc::UnknownParameter: return "UnknownParameter";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

class SimError : public std::runtime_error {
 public:
  SimError(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace itmsim
