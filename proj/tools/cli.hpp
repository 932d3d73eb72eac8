#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace entroshock::cli {

inline constexpr const char* env_prefix = "ENTROSHOCK_";

// Runs the command-line tool. Exit codes: 0 success, 1 data/processing error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Settings file: either a previously echoed config.json ({"settings": {...}}) or
// `key = value` lines (INI sections are ignored). Keys use the long flag names.
std::map<std::string, std::string> load_settings_file(const std::string& path);

}  // namespace entroshock::cli
