#ifndef ROSTER_ERROR_H_
#define ROSTER_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace roster {

// Error categories surfaced to callers. The CLI maps any of these to exit
// code 2; the service maps them to 4xx responses.
enum class ErrorCode {
  kInvalidArgument,
  kSchemaViolation,
  kUnsupportedVersion,
  kRankGap,
  kDuplicateRank,
  kDimensionMismatch,
  kUnknownPoolSize,
  kUnknownNurse,
  kScoreOutOfRange,
  kNegativeDemand,
  kInconsistentMinimums,
  kEnumerationCap,
  kIo,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class RosterError : public std::runtime_error {
 public:
  RosterError(ErrorCode code, std::string location, const std::string& message)
      : std::runtime_error(message),
        code_(code),
        location_(std::move(location)) {}

  ErrorCode code() const { return code_; }
  // JSON-pointer-like path or "file:line" naming where the problem is.
  const std::string& location() const { return location_; }

 private:
  ErrorCode code_;
  std::string location_;
};

}  // namespace roster

#endif  // ROSTER_ERROR_H_
