#include "phasetopo/error.hpp"

namespace phasetopo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::NonFiniteSample: return "NonFiniteSample";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::NegativeScale: return "NegativeScale";
    case ErrorCode::MalformedFiltration: return "MalformedFiltration";
    case ErrorCode::TooLargeForOracle: return "TooLargeForOracle";
    case ErrorCode::MixedDimensions: return "MixedDimensions";
    case ErrorCode::NonFinitePair: return "NonFinitePair";
    case ErrorCode::EpsMaxMismatch: return "EpsMaxMismatch";
    case ErrorCode::DivergedTrajectory: return "DivergedTrajectory";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ChannelCountMismatch: return "ChannelCountMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::EmptyTrainSet: return "EmptyTrainSet";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace phasetopo
