#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ndf/errors.hpp"

namespace ndf::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kSuccess = 0,
    kRuntimeFailure = 1,
    kConfigError = 2,
    kAmbiguity = 3,
    kCheckFailure = 4,
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Runs one command line (args excludes the program name). Reports go to
/// `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "3..6" -> {3,4,5,6}; "1,2,5" -> {1,2,5}; ranges and lists may be mixed.
std::vector<long long> parse_int_list(const std::string& text);

}  // namespace ndf::cli
