#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "eitnoise/config.hpp"

namespace eit::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kConfigError = 2,
  kSolverFailure = 3,
  kInconsistent = 4,
};

struct Options {
  std::string subcommand;
  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<std::string> model;
  bool dump_config = false;
  bool include_vacuum_transit = false;
};

/// Subcommands accepted by execute().
inline constexpr const char* kSubcommands[] = {
    "susceptibility", "spectrum", "squeezing",
    "entanglement",   "consistency", "verify"};

/// Resolves the configuration (preset, then config file, then flags).
/// Throws Error{Config} on any problem.
RunConfig resolve_config(const Options& opts);

/// Runs one subcommand. Data goes to the configured output path (`-` is
/// `out`); human-readable summaries go to `out`, or to `err` when the data
/// itself is on `out`.
int execute(const Options& opts, std::ostream& out, std::ostream& err);

/// argv front end.
int main(int argc, char** argv);

}  // namespace eit::cli
