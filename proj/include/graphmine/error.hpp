#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphmine {

enum class ErrorCode {
  OutOfRangeNode,
  SelfLoop,
  DuplicateEdge,
  TooManyEdges,
  ConnectivityRetryExhausted,
  IsolatedNode,
  DisconnectedGraph,
  NotSymmetric,
  NoConvergence,
  MatrixTooLarge,
  GraphTooLarge,
  RankTooLarge,
  NotFitted,
  IncompleteMembership,
  EmptyCorpus,
  IncompleteFeatureMap,
  LengthMismatch,
  DegenerateSplit,
  DimensionMismatch,
  SingleClassTest,
  ParseError,
  InvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRangeNode: return "OutOfRangeNode";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::TooManyEdges: return "TooManyEdges";
    case ErrorCode::ConnectivityRetryExhausted: return "ConnectivityRetryExhausted";
    case ErrorCode::IsolatedNode: return "IsolatedNode";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::MatrixTooLarge: return "MatrixTooLarge";
    case ErrorCode::GraphTooLarge: return "GraphTooLarge";
    case ErrorCode::RankTooLarge: return "RankTooLarge";
    case ErrorCode::NotFitted: return "NotFitted";
    case ErrorCode::IncompleteMembership: return "IncompleteMembership";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::IncompleteFeatureMap: return "IncompleteFeatureMap";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleClassTest: return "SingleClassTest";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library. The code identifies the contract
/// that was violated; the message is a one-line human diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace graphmine
