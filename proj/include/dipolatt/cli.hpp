#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace dipolatt::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes of the batch front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> parameters;  // resolved key -> value
  std::string output_path;                        // empty: stdout
  std::string output_format = "json";             // json | csv
  std::uint64_t seed = 0;
  int workers = 1;
};

// Parse a JSON config document ({"subcommand": ..., "parameters": {...},
// "output_format": ..., "seed": ..., "workers": ...}).  Throws InputError.
RunConfig config_from_json_text(const std::string& text);

// Execute one batch run; results go to config.output_path or `fallback_out`.
// Returns an exit code; never throws.
int run(const RunConfig& config, std::ostream& fallback_out, std::ostream& diag);

}  // namespace dipolatt::cli
