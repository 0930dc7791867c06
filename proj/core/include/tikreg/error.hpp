#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tikreg {

enum class ErrorCode {
  InvalidArgument,
  SvdNoConvergence,
  SingularRegularizedSystem,
  UnregularizedNullComponent,
  NoiseDominatesData,
  DiscrepancyUnattainable,
  NotOrthogonal,
  IterationLimit,
  ParseError,
  TooManyExclusions,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the experiment runner in particular) can branch on the kind.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace tikreg
