// qfelo: quantum FEL oscillator statistics and design toolkit.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qfel/cli.hpp"
#include "qfel/version.hpp"

namespace {

int parse_threads(const std::string& s) {
  if (s == "auto") return 0;
  try {
    size_t pos = 0;
    const int n = std::stoi(s, &pos);
    if (pos == s.size() && n >= 1) return n;
  } catch (const std::exception&) {
  }
  std::cerr << "config error: --threads must be a positive integer or "
               "\"auto\"\n";
  std::exit(qfel::kExitConfig);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qfelo: steady-state photon statistics, dynamics, and experimental "
      "design for a quantum FEL oscillator"};
  app.set_version_flag("--version", qfel::kVersion);
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 1 config error, 2 numeric error, 3 io error.\n"
      "Output directory defaults to $QFELO_OUT, then the current directory.\n"
      "Each run writes <subcommand>_<tag>.csv/.json artifacts plus a\n"
      "manifest.json with the resolved config and per-file sha256 checksums.");

  qfel::Command cmd;
  std::string threads = "auto";

  const struct {
    const char* name;
    const char* desc;
    qfel::Command::Sub sub;
  } subs[] = {
      {"stats", "steady-state photon-number distribution and moments",
       qfel::Command::Sub::Stats},
      {"sweep", "2D pump/momentum parameter sweep of mean and Fano factor",
       qfel::Command::Sub::Sweep},
      {"dynamics", "master-equation relaxation to the steady state",
       qfel::Command::Sub::Dynamics},
      {"classical", "quantum vs classical-surrogate distribution comparison",
       qfel::Command::Sub::Classical},
      {"design", "experimental parameter chain with constraint verdicts",
       qfel::Command::Sub::Design},
      {"feasibility", "beam-parameter feasibility region scan",
       qfel::Command::Sub::Feasibility},
  };
  for (const auto& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.desc);
    sc->add_option("--config", cmd.config_path, "JSON configuration file");
    sc->add_option("--out", cmd.out_dir, "output directory");
    sc->add_option("--tag", cmd.tag,
                   "artifact name tag (default: UTC timestamp)");
    sc->add_option("--threads", threads, "worker threads or \"auto\"")
        ->default_str("auto");
    sc->add_option("--tolerance", cmd.tolerance_override,
                   "override tolerances.rel_tol");
    const qfel::Command::Sub sub = s.sub;
    sc->callback([&cmd, sub] { cmd.subcommand = sub; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qfel::kExitConfig;
  }

  cmd.threads = parse_threads(threads);
  return qfel::run(cmd);
}
