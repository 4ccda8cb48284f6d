#ifndef FAITHDEBATE_ERRORS_HPP
#define FAITHDEBATE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace faithdebate {

// Error codes are shared with the C API (see faithdebate.h); the numeric
// values must stay in sync with the FD_ERR_* constants there.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  InvalidWireLabel = 2,
  MissingContext = 3,
  ParseFailure = 4,
  BackendUnavailable = 5,
  AuthError = 6,
  ScriptedExhausted = 7,
  InvalidSplit = 8,
  AllAgentsInvalid = 9,
  AllAdjudicatorsInvalid = 10,
  DegradedSignal = 11,
  MissingVerdict = 12,
  MissingTranscripts = 13,
  SchemaError = 14,
  KeyMismatch = 15,
  LengthMismatch = 16,
  UndefinedRate = 17,
  DegenerateData = 18,
  InvalidConfig = 19,
  IoError = 20,
  PreconditionViolation = 21,
  Internal = 22,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, std::string message) {
  throw Error(code, std::move(message));
}

}  // namespace faithdebate

#endif  // FAITHDEBATE_ERRORS_HPP
