#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmslab {

enum class ErrorCode {
  kPrecondition,
  kBudgetExceeded,
  kDisconnected,
  kFormat,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Thrown for precondition violations and malformed inputs. Report-style
// operations (validators, checks) never throw; they describe what they saw.
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

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::kPrecondition, message);
}

}  // namespace mmslab
