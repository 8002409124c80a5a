#pragma once

#include "polarity/json_io.hpp"
#include "polarity/pipeline.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace polarity {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitInput = 3, kExitNumerical = 4 };

/// Everything `build` needs. Relative paths in a config file are resolved
/// against the file's directory.
struct RunConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path response_path;
  std::filesystem::path output_dir;
  ModelConfig model;
};

/// All defaults materialized. Thread count and output directory are left
/// out when `for_manifest` is set since they do not affect results.
Json run_config_to_json(const RunConfig& config, bool for_manifest = false);
RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Entry point of the `polarity` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polarity
