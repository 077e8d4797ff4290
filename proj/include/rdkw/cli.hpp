#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rdkw::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kValidation = 3,
  kDivergence = 4,
};

/// Flat "key=value" config file. Blank lines and lines starting with '#'
/// are skipped; whitespace around keys and values is trimmed.
/// Throws ParseError on a line without '='.
std::map<std::string, std::string> parse_config(std::string_view text);

/// Entry point behind the rdkw binary. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rdkw::cli
