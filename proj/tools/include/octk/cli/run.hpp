#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "octk/cli/config.hpp"

namespace octk::cli {

/// Exit statuses of the octk tool.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitUnexpected = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitCheckFailed = 4,
};

std::string_view version();

struct Artifact {
  std::string name;
  std::string content;
};

struct RunResult {
  std::vector<Artifact> artifacts;  ///< in write order; the manifest comes last
  int status = kExitSuccess;
  std::string summary;  ///< one line for the terminal
};

/// Runs one command. Config and domain errors surface as ConfigError or
/// DomainError, integration failures as NumericalError.
RunResult run(const RunConfig& config);

/// Canned figure protocol; status is kExitCheckFailed when a regime check fails.
/// Throws DomainError for unknown figure names.
RunResult reproduce(std::string_view figure, std::uint64_t seed = 0);

/// Writes every artifact into `dir`, creating it as needed.
void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& j);

}  // namespace octk::cli
