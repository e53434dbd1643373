#include "vismca/core/errors.hpp"

namespace vismca {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::UnknownDetection: return "UnknownDetection";
    case Errc::UnknownImage: return "UnknownImage";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::UnknownClass: return "UnknownClass";
    case Errc::UnknownObject: return "UnknownObject";
    case Errc::EmptySelection: return "EmptySelection";
    case Errc::CorruptLog: return "CorruptLog";
    case Errc::NoPositives: return "NoPositives";
    case Errc::BadBinCount: return "BadBinCount";
    case Errc::BadThreshold: return "BadThreshold";
    case Errc::BadArgument: return "BadArgument";
    case Errc::WrongSource: return "WrongSource";
    case Errc::StaleRevision: return "StaleRevision";
    case Errc::StoreLocked: return "StoreLocked";
    case Errc::PortInUse: return "PortInUse";
    case Errc::IngestFailure: return "IngestFailure";
    case Errc::ReadOnly: return "ReadOnly";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace vismca
