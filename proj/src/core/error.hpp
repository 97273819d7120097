#pragma once

#include <stdexcept>
#include <string>

namespace cs {

enum class ErrorCode {
  EndpointOutOfRange,
  SelfLoop,
  VertexNotInGraph,
  MalformedRecord,
  KTooSmall,
  Disconnected,
  TooSmall,
  GraphTooLarge,
  InvalidParams,
  InfeasibleParams,
  RetriesExhausted,
  NoViableInstance,
  EmptyExemplarPool,
  AuthMissing,
  Timeout,
  RateLimited,
  ProviderError,
  ScriptExhausted,
  NoMatch,
  BackendError,
  NoCandidates,
  EmptyTruth,
  EmptyRecords,
  ConfigInvalid,
  IoError,
};

const char* error_code_name(ErrorCode code);

class CsError : public std::runtime_error {
 public:
  CsError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cs
