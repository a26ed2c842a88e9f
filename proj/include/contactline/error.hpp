#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace contactline {

/// Failure categories surfaced to callers and to the CLI error JSON.
enum class ErrorKind {
  InvalidConfig,
  NoConvergence,
  DegenerateMap,
  MeshFailure,
  RankMismatch,
  RankDeficient,
  StepSingular,
  NotPositiveDefinite,
  IncompatibleData,
  BallExit,
  NoContraction,
  NonFinite,
  IoFailure,
  VerificationFailed
};

std::string to_string(ErrorKind kind);

/// Structured error: a kind, a message and machine-readable details.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message, nlohmann::json details = nlohmann::json::object());

  ErrorKind kind() const { return kind_; }
  const nlohmann::json& details() const { return details_; }

  /// {"error": kind, "message": ..., "details": {...}}
  nlohmann::json to_json() const;

private:
  ErrorKind kind_;
  nlohmann::json details_;
};

} // namespace contactline
