// Batch subcommands behind the command-line driver. Each resolves its
// configuration (defaults, then --config file, then per-key flags), writes a
// manifest, runs, writes its CSV artifacts plus checks.csv and returns an exit
// status.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sburgers/config.hpp"

namespace sburgers {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitDivergence = 3,
};

struct CommonOptions {
  std::optional<std::string> config_path;
  std::uint64_t seed = 0;
  std::string out = "out";
  int threads = 1;
  std::vector<std::pair<std::string, std::string>> overrides;
};

const std::vector<std::string>& command_names();
/// Default configuration of a subcommand; its keys are the accepted keys.
Config default_config(const std::string& command);
/// Defaults merged with the config file and the overrides; UsageError on unknown keys.
Config resolve_config(const std::string& command, const CommonOptions& options);

/// Runs a subcommand; usage problems propagate as UsageError.
int run_command(const std::string& command, const CommonOptions& options, std::ostream& log);

}  // namespace sburgers
