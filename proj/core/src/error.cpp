#include "tikreg/error.hpp"

namespace tikreg {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SvdNoConvergence: return "SvdNoConvergence";
    case ErrorCode::SingularRegularizedSystem: return "SingularRegularizedSystem";
    case ErrorCode::UnregularizedNullComponent: return "UnregularizedNullComponent";
    case ErrorCode::NoiseDominatesData: return "NoiseDominatesData";
    case ErrorCode::DiscrepancyUnattainable: return "DiscrepancyUnattainable";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TooManyExclusions: return "TooManyExclusions";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace tikreg
