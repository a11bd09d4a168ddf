#include "mia/error.hpp"

namespace mia {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::SchedulingInPast: return "SchedulingInPast";
    case Errc::InvalidDistribution: return "InvalidDistribution";
    case Errc::DanglingReference: return "DanglingReference";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::UnknownAsset: return "UnknownAsset";
    case Errc::UnknownTask: return "UnknownTask";
    case Errc::TimeRegression: return "TimeRegression";
    case Errc::InvalidState: return "InvalidState";
    case Errc::CyclicPrecedence: return "CyclicPrecedence";
    case Errc::UnknownRole: return "UnknownRole";
    case Errc::UnknownAssetBinding: return "UnknownAssetBinding";
    case Errc::InvalidMission: return "InvalidMission";
    case Errc::NoEndUserNodes: return "NoEndUserNodes";
    case Errc::UnknownTarget: return "UnknownTarget";
    case Errc::MissingOnset: return "MissingOnset";
    case Errc::InvalidThreatSpec: return "InvalidThreatSpec";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::BaselineZero: return "BaselineZero";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::ConstantSeries: return "ConstantSeries";
    case Errc::InsufficientOverlap: return "InsufficientOverlap";
    case Errc::MismatchedBinning: return "MismatchedBinning";
    case Errc::NoValidLag: return "NoValidLag";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace mia
