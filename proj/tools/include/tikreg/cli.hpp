#pragma once

#include <iosfwd>

namespace tikreg {

// Exit codes: 0 success, 1 runtime failure (or failed claims for `props`),
// 2 usage or configuration error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tikreg
