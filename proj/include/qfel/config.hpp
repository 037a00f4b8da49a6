#pragma once

// JSON run configuration. Every section is optional in the file; the CLI
// enforces per-subcommand presence. Unknown keys are rejected so typos fail
// loudly instead of silently running defaults.

#include <string>

#include <json.hpp>

#include "qfel/design.hpp"
#include "qfel/dynamics.hpp"
#include "qfel/momentum.hpp"
#include "qfel/params.hpp"
#include "qfel/quantum_stats.hpp"

namespace qfel {

struct RunConfig {
  // "quantum": theta | delta_threshold, Na, wrT | alpha_at_Na, distribution.
  bool has_quantum = false;
  QuantumOscParams params;
  MomentumDistribution dist = MomentumDistribution::delta(0.5);

  // "tolerances"
  double rel_tol = 1e-10;
  double steady_tol = 1e-9;  // TV distance target for the dynamics oracle

  // "nmax_policy"
  NmaxPolicy nmax;

  // "sweep"
  bool has_sweep = false;
  SweepScenario scenario = SweepScenario::ThetaVsMomentum;
  GridAxis theta_axis{0.0, 15.0, 301, false};
  GridAxis sweep_axis2{0.5, 0.5, 1, false};

  // "dynamics"
  PumpModel pump = PumpModel::PoissonEnsemble;
  long long max_kicks = 50'000'000;

  // "classical"
  double classical_wrT = 0.2;
  double classical_delta = 0.05;

  // "design"
  DesignInputs design;
  bool operating_point = true;

  // "feasibility": log-spaced candidate axes around the operating point.
  GridAxis sigma_axis{1e-8, 1e-5, 97, true};
  GridAxis eps_axis{1e-10, 1e-7, 97, true};

  // Full configuration with defaults materialized, for the run manifest.
  nlohmann::json resolved() const;
};

// Parses and validates; throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json& j);

// Reads the file (throws IoError), parses the JSON (malformed JSON is a
// ConfigError), then delegates to parse_config.
RunConfig load_config(const std::string& path);

}  // namespace qfel
