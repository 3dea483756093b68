#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anp {

enum class ErrorCode {
  DuplicateJudgment,
  IncompleteJudgments,
  InvalidScaleValue,
  ConvergenceFailure,
  UnsupportedOrder,
  SlotShapeMismatch,
  UnknownSlot,
  IncompleteModel,
  NotAHierarchy,
  InvalidOverride,
  ConsistencyFailure,
  UnsupportedVersion,
  SchemaError,
  IntegrityFailure,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the engine carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace anp
