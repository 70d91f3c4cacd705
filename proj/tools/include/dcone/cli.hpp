#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dcone/error.hpp"

namespace dcone::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNoConvergence = 3;

/// Full command line including the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

int exit_code_for(ErrorCode code) noexcept;

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double x);

std::uint64_t fnv1a(std::string_view bytes);

/// "0.2,0.1" or "start:stop:count".
std::vector<double> parse_list(std::string_view text);

std::string version();

}  // namespace dcone::cli
