#include "core/error.hpp"

namespace cs {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EndpointOutOfRange: return "EndpointOutOfRange";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::VertexNotInGraph: return "VertexNotInGraph";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::KTooSmall: return "KTooSmall";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::GraphTooLarge: return "GraphTooLarge";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InfeasibleParams: return "InfeasibleParams";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::NoViableInstance: return "NoViableInstance";
    case ErrorCode::EmptyExemplarPool: return "EmptyExemplarPool";
    case ErrorCode::AuthMissing: return "AuthMissing";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::ProviderError: return "ProviderError";
    case ErrorCode::ScriptExhausted: return "ScriptExhausted";
    case ErrorCode::NoMatch: return "NoMatch";
    case ErrorCode::BackendError: return "BackendError";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::EmptyTruth: return "EmptyTruth";
    case ErrorCode::EmptyRecords: return "EmptyRecords";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace cs
