#pragma once

#include <iosfwd>

namespace cifh::cli {

/// Exit codes: 0 success, 1 operational error, 2 a certified bound or
/// acceptance criterion failed.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cifh::cli
