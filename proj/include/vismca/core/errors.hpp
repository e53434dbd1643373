#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vismca {

enum class Errc {
  ParseError,
  ValidationError,
  UnknownDetection,
  UnknownImage,
  UnknownLabel,
  UnknownClass,
  UnknownObject,
  EmptySelection,
  CorruptLog,
  NoPositives,
  BadBinCount,
  BadThreshold,
  BadArgument,
  WrongSource,
  StaleRevision,
  StoreLocked,
  PortInUse,
  IngestFailure,
  ReadOnly,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

/// Base of every error raised by the engine. The code is stable and is what
/// the HTTP layer and the CLI report; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace vismca
