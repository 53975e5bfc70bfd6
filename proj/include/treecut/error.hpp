#pragma once

#include <stdexcept>
#include <string>

namespace treecut {

enum class ErrorCode {
  kNotATree,
  kNonPositiveVertexWeight,
  kNegativeValue,
  kUnknownVertexId,
  kDuplicateVertexId,
  kRootHasNoParentEdge,
  kInvalidProblem,
  kTableMismatch,
  kEmptyPart,
  kBudgetExceeded,
  kPrecollision,
  kNotForestAfterDeletion,
  kLambdaTooSmall,
  kParseError,
  kDuplicateEdge,
  kSelfLoop,
  kEmptyGraph,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace treecut
