#include "contactline/error.hpp"

namespace contactline {

std::string to_string(ErrorKind kind)
{
  switch (kind) {
  case ErrorKind::InvalidConfig: return "InvalidConfig";
  case ErrorKind::NoConvergence: return "NoConvergence";
  case ErrorKind::DegenerateMap: return "DegenerateMap";
  case ErrorKind::MeshFailure: return "MeshFailure";
  case ErrorKind::RankMismatch: return "RankMismatch";
  case ErrorKind::RankDeficient: return "RankDeficient";
  case ErrorKind::StepSingular: return "StepSingular";
  case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
  case ErrorKind::IncompatibleData: return "IncompatibleData";
  case ErrorKind::BallExit: return "BallExit";
  case ErrorKind::NoContraction: return "NoContraction";
  case ErrorKind::NonFinite: return "NonFinite";
  case ErrorKind::IoFailure: return "IoFailure";
  case ErrorKind::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, nlohmann::json details)
    : std::runtime_error(message), kind_(kind), details_(std::move(details))
{
}

nlohmann::json Error::to_json() const
{
  return {{"error", to_string(kind_)}, {"message", what()}, {"details", details_}};
}

} // namespace contactline
