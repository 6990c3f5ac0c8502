#ifndef MWALL_ERROR_HPP
#define MWALL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mwall {

enum class ErrorCode {
  DomainError,
  InvalidArgument,
  FrameMismatch,
  GridTooSmall,
  NodeSingularity,
  ClearanceViolation,
  NoCollision,
  SingularSystem,
  RegionTooSmall,
  NoSignal,
  ContaminatedRun,
  IncompleteReflection,
  AliasedShift,
  FlatPattern,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// code name is prefixed to what() so messages can be matched by callers.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace mwall

#endif
