#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace covent {

enum class ErrorCode {
  InvalidArgument,
  CarrierMismatch,
  NotAPartition,
  NotACover,
  InadmissibleWord,
  ReducibleChain,
  RouteDisagreement,
  SubadditivityViolation,
  BudgetExceeded,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. Every error path in the
/// library throws this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace covent
