#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace partrec {

enum class ErrorCode {
  InvalidPlan,
  IndexOutOfRange,
  EmptySelection,
  BadFirstIndex,
  InvalidQuery,
  NegativeCutoff,
  RankTooLarge,
  UnknownFamily,
  BadParams,
  InversionFailure,
  QuadratureFailure,
  TooManyIndices,
  UnboundedSupport,
  ZeroMass,
  NonIntegerGrid,
  StateSpaceTooLarge,
  InvalidConfig,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace partrec
