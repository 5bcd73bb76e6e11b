#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dyadcov {

enum class ErrorCode {
  UnknownLabel,
  DuplicateLabel,
  SelfLoop,
  DuplicateDyad,
  RaggedRegressors,
  EmptyDataset,
  DegenerateDof,
  NonpositiveVariance,
  BlockTooLong,
  UnknownParameter,
  InvalidArgument,
  Parse,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Every failure surfaced by dyadcov carries one of
/// the codes above so that callers (the CLI, the simulator) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dyadcov
