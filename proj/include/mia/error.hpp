#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mia {

enum class Errc {
  // sim
  SchedulingInPast,
  InvalidDistribution,
  // infrastructure
  DanglingReference,
  DuplicateId,
  SelfLoop,
  UnknownAsset,
  UnknownTask,
  TimeRegression,
  InvalidState,
  // mission
  CyclicPrecedence,
  UnknownRole,
  UnknownAssetBinding,
  InvalidMission,
  // threat
  NoEndUserNodes,
  UnknownTarget,
  MissingOnset,
  InvalidThreatSpec,
  // metrics
  EmptyInput,
  BaselineZero,
  // flows
  MalformedLine,
  EmptyWindow,
  // discovery
  ConstantSeries,
  InsufficientOverlap,
  MismatchedBinning,
  NoValidLag,
  // documents
  ParseError,
  ValidationError,
  Io,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure the library reports. The code is stable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mia
