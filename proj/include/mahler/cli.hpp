#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mahler/laurent.hpp"

namespace mahler::cli {

/// Exit statuses of run().
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kUncertified = 2;

/// Parses {"A": [...], "B": [...], "d": int, "b": int?}. Coefficients are
/// listed constant term first, as integers or "num/den" strings. Throws
/// ParseError with the offending position or field.
MahlerSystem parse_system(std::string_view json_text);

/// The system as canonical JSON text.
std::string system_json(const MahlerSystem& sys);

/// Runs one command line (argv[0] is the program name). The report goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mahler::cli
