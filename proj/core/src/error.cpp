#include "mmslab/error.hpp"

namespace mmslab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kPrecondition:
      return "precondition";
    case ErrorCode::kBudgetExceeded:
      return "budget_exceeded";
    case ErrorCode::kDisconnected:
      return "disconnected";
    case ErrorCode::kFormat:
      return "format";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace mmslab
