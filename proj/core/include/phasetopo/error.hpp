#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phasetopo {

/// Failure categories raised across the pipeline. Every thrown phasetopo::Error
/// carries exactly one of these so callers can branch without parsing messages.
enum class ErrorCode {
  InvalidArgument,
  SeriesTooShort,
  NonFiniteSample,
  EmptyCloud,
  NegativeScale,
  MalformedFiltration,
  TooLargeForOracle,
  MixedDimensions,
  NonFinitePair,
  EpsMaxMismatch,
  DivergedTrajectory,
  MissingFile,
  ParseError,
  ChannelCountMismatch,
  ChecksumMismatch,
  ClassTooSmall,
  FingerprintMismatch,
  EmptyTrainSet,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace phasetopo
