#pragma once

#include <stdexcept>
#include <string>

namespace nct {

enum class ErrorCode {
  InvalidArgument,
  NotCoprime,
  SpecMismatch,
  LatticeMismatch,
  PeriodTooSmall,
  NotAFrame,
  CgStagnation,
  NotAProjection,
  NotDual,
  LaurentUnavailable,
  Config,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace nct
