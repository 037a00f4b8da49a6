#pragma once

// Subcommand execution behind the command-line front end. Each run emits its
// data files plus a manifest.json recording the resolved configuration, tool
// version, and per-file checksums. Data file bodies are deterministic;
// wall-clock state appears only in the manifest.

#include <string>

namespace qfel {

struct Command {
  enum class Sub { Stats, Sweep, Dynamics, Classical, Design, Feasibility };
  Sub subcommand = Sub::Stats;
  std::string config_path;  // empty runs on built-in defaults
  std::string out_dir;      // empty: $QFELO_OUT, then current directory
  std::string tag;          // empty: UTC timestamp
  int threads = 0;          // 0 = auto (hardware concurrency)
  double tolerance_override = 0.0;  // > 0 replaces tolerances.rel_tol
};

// Exit codes, documented in --help.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitIo = 3;

// Executes the subcommand; writes artifacts, prints a one-line result per
// file to stdout, maps errors to the exit codes above with a diagnostic on
// stderr.
int run(const Command& cmd);

const char* subcommand_name(Command::Sub sub);

}  // namespace qfel
