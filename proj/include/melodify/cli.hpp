#pragma once

#include <iosfwd>
#include <string_view>

#include "melodify/error.hpp"

namespace melodify::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInternal = 2;

/// Stable stderr code (E_IO, E_PARSE, E_BINDING, E_PROPORTION, E_INTERNAL).
std::string_view error_tag(ErrorCode code);
int exit_code_for(ErrorCode code);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace melodify::cli
