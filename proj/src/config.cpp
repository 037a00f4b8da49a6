#include "qfel/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "qfel/errors.hpp"

namespace qfel {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
}

void reject_unknown(const json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

double get_number(const json& j, const std::string& where,
                  const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number())
    throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

double require_number(const json& j, const std::string& where,
                      const std::string& key) {
  if (!j.contains(key))
    throw ConfigError("missing required key " + where + "." + key);
  return get_number(j, where, key, 0.0);
}

long long get_integer(const json& j, const std::string& where,
                      const std::string& key, long long fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw ConfigError(where + "." + key + " must be an integer");
  return v.get<long long>();
}

bool get_bool(const json& j, const std::string& where, const std::string& key,
              bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean())
    throw ConfigError(where + "." + key + " must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& j, const std::string& where,
                       const std::string& key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string())
    throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

GridAxis parse_axis(const json& j, const std::string& where,
                    const GridAxis& fallback) {
  require_object(j, where);
  reject_unknown(j, where, {"lo", "hi", "count", "log"});
  GridAxis axis = fallback;
  axis.lo = get_number(j, where, "lo", fallback.lo);
  axis.hi = get_number(j, where, "hi", fallback.hi);
  axis.count = int(get_integer(j, where, "count", fallback.count));
  axis.log_spaced = get_bool(j, where, "log", fallback.log_spaced);
  if (axis.count < 1) throw ConfigError(where + ".count must be >= 1");
  if (axis.hi < axis.lo) throw ConfigError(where + ".hi below .lo");
  if (axis.log_spaced && !(axis.lo > 0.0))
    throw ConfigError(where + ": log spacing needs lo > 0");
  return axis;
}

MomentumDistribution parse_distribution(const json& j) {
  const std::string where = "quantum.distribution";
  require_object(j, where);
  reject_unknown(j, where, {"kind", "center_p_over_q", "width_dp_over_q"});
  const std::string kind = get_string(j, where, "kind", "delta");
  const double center = get_number(j, where, "center_p_over_q", 0.5);
  const double width = get_number(j, where, "width_dp_over_q", 0.0);
  if (kind == "delta") {
    if (j.contains("width_dp_over_q") && width != 0.0)
      throw ConfigError(where + ": delta kind takes no width");
    return MomentumDistribution::delta(center);
  }
  if (kind == "gaussian") return MomentumDistribution::gaussian(center, width);
  throw ConfigError(where + ".kind must be \"delta\" or \"gaussian\"");
}

void parse_quantum(const json& j, RunConfig& cfg) {
  const std::string where = "quantum";
  require_object(j, where);
  reject_unknown(j, where,
                 {"theta", "delta_threshold", "Na", "wrT", "alpha_at_Na",
                  "distribution"});
  const double Na = require_number(j, where, "Na");

  const bool has_theta = j.contains("theta");
  const bool has_delta = j.contains("delta_threshold");
  if (has_theta == has_delta)
    throw ConfigError(
        "quantum needs exactly one of \"theta\" or \"delta_threshold\"");
  double theta = 0.0;
  if (has_theta) {
    theta = require_number(j, where, "theta");
  } else {
    const double delta = require_number(j, where, "delta_threshold");
    theta = gT_for_threshold_deviation(delta, Na) * std::sqrt(Na);
  }

  const bool has_wrT = j.contains("wrT");
  const bool has_alpha = j.contains("alpha_at_Na");
  if (has_wrT == has_alpha)
    throw ConfigError(
        "quantum needs exactly one of \"wrT\" or \"alpha_at_Na\"");
  cfg.params = has_wrT
                   ? QuantumOscParams::from_theta_Na_wrT(
                         theta, Na, require_number(j, where, "wrT"))
                   : QuantumOscParams::from_theta_Na_alpha(
                         theta, Na, require_number(j, where, "alpha_at_Na"));
  cfg.has_quantum = true;
  if (j.contains("distribution")) cfg.dist = parse_distribution(j.at("distribution"));
}

void parse_sweep(const json& j, RunConfig& cfg) {
  const std::string where = "sweep";
  require_object(j, where);
  reject_unknown(j, where, {"scenario", "theta", "axis2"});
  const std::string scenario =
      get_string(j, where, "scenario", "momentum_center");
  if (scenario == "momentum_center")
    cfg.scenario = SweepScenario::ThetaVsMomentum;
  else if (scenario == "momentum_width")
    cfg.scenario = SweepScenario::ThetaVsWidth;
  else
    throw ConfigError(
        "sweep.scenario must be \"momentum_center\" or \"momentum_width\"");
  if (j.contains("theta"))
    cfg.theta_axis = parse_axis(j.at("theta"), "sweep.theta", cfg.theta_axis);
  if (!j.contains("axis2"))
    throw ConfigError("missing required key sweep.axis2");
  GridAxis fallback = cfg.scenario == SweepScenario::ThetaVsMomentum
                          ? GridAxis{0.5, 0.5, 1, false}
                          : GridAxis{0.0, 0.1, 2, false};
  cfg.sweep_axis2 = parse_axis(j.at("axis2"), "sweep.axis2", fallback);
  cfg.has_sweep = true;
}

void parse_dynamics(const json& j, RunConfig& cfg) {
  const std::string where = "dynamics";
  require_object(j, where);
  reject_unknown(j, where, {"pump", "max_kicks"});
  const std::string pump = get_string(j, where, "pump", "ensemble");
  if (pump == "ensemble")
    cfg.pump = PumpModel::PoissonEnsemble;
  else if (pump == "kicks")
    cfg.pump = PumpModel::SequentialKicks;
  else
    throw ConfigError("dynamics.pump must be \"ensemble\" or \"kicks\"");
  cfg.max_kicks = get_integer(j, where, "max_kicks", cfg.max_kicks);
  if (cfg.max_kicks < 1) throw ConfigError("dynamics.max_kicks must be >= 1");
}

void parse_classical(const json& j, RunConfig& cfg) {
  const std::string where = "classical";
  require_object(j, where);
  reject_unknown(j, where, {"wrT", "delta"});
  cfg.classical_wrT = get_number(j, where, "wrT", cfg.classical_wrT);
  cfg.classical_delta = get_number(j, where, "delta", cfg.classical_delta);
}

void parse_design(const json& j, RunConfig& cfg) {
  const std::string where = "design";
  require_object(j, where);
  reject_unknown(j, where,
                 {"lambda_L", "lambda_W", "G1", "wrT", "kpL", "RspL", "delta",
                  "f_rep", "tau_e", "phi", "vartheta", "operating_point"});
  DesignInputs& d = cfg.design;
  d.lambda_L = get_number(j, where, "lambda_L", d.lambda_L);
  d.lambda_W = get_number(j, where, "lambda_W", d.lambda_W);
  d.gain_G1 = get_number(j, where, "G1", d.gain_G1);
  d.recoil_wrT = get_number(j, where, "wrT", d.recoil_wrT);
  d.kpL_target = get_number(j, where, "kpL", d.kpL_target);
  d.RspL_target = get_number(j, where, "RspL", d.RspL_target);
  d.delta = get_number(j, where, "delta", d.delta);
  d.f_rep = get_number(j, where, "f_rep", d.f_rep);
  d.tau_e = get_number(j, where, "tau_e", d.tau_e);
  d.phi = get_number(j, where, "phi", d.phi);
  d.vartheta = get_number(j, where, "vartheta", d.vartheta);
  cfg.operating_point = get_bool(j, where, "operating_point", true);
}

void parse_feasibility(const json& j, RunConfig& cfg) {
  const std::string where = "feasibility";
  require_object(j, where);
  reject_unknown(j, where, {"sigma", "eps"});
  if (j.contains("sigma"))
    cfg.sigma_axis = parse_axis(j.at("sigma"), "feasibility.sigma", cfg.sigma_axis);
  if (j.contains("eps"))
    cfg.eps_axis = parse_axis(j.at("eps"), "feasibility.eps", cfg.eps_axis);
}

json axis_json(const GridAxis& a) {
  return json{{"lo", a.lo}, {"hi", a.hi}, {"count", a.count}, {"log", a.log_spaced}};
}

}  // namespace

RunConfig parse_config(const nlohmann::json& j) {
  require_object(j, "config root");
  reject_unknown(j, "config root",
                 {"quantum", "tolerances", "nmax_policy", "sweep", "dynamics",
                  "classical", "design", "feasibility"});
  RunConfig cfg;
  if (j.contains("quantum")) parse_quantum(j.at("quantum"), cfg);

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    require_object(t, "tolerances");
    reject_unknown(t, "tolerances", {"rel_tol", "steady_tol"});
    cfg.rel_tol = get_number(t, "tolerances", "rel_tol", cfg.rel_tol);
    cfg.steady_tol = get_number(t, "tolerances", "steady_tol", cfg.steady_tol);
    if (!(cfg.rel_tol > 1e-14 && cfg.rel_tol < 1e-2))
      throw ConfigError("tolerances.rel_tol outside (1e-14, 1e-2)");
    if (!(cfg.steady_tol > 0.0))
      throw ConfigError("tolerances.steady_tol must be positive");
  }

  if (j.contains("nmax_policy")) {
    const json& p = j.at("nmax_policy");
    require_object(p, "nmax_policy");
    reject_unknown(p, "nmax_policy", {"start_extra", "hard_cap"});
    cfg.nmax.start_extra =
        get_integer(p, "nmax_policy", "start_extra", cfg.nmax.start_extra);
    cfg.nmax.hard_cap =
        get_integer(p, "nmax_policy", "hard_cap", cfg.nmax.hard_cap);
    if (cfg.nmax.start_extra < 1 || cfg.nmax.hard_cap < 2)
      throw ConfigError("nmax_policy values out of range");
  }

  if (j.contains("sweep")) parse_sweep(j.at("sweep"), cfg);
  if (j.contains("dynamics")) parse_dynamics(j.at("dynamics"), cfg);
  if (j.contains("classical")) parse_classical(j.at("classical"), cfg);
  if (j.contains("design")) parse_design(j.at("design"), cfg);
  if (j.contains("feasibility")) parse_feasibility(j.at("feasibility"), cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::json RunConfig::resolved() const {
  json out;
  if (has_quantum) {
    json dj{{"kind", dist.kind == MomentumDistribution::Kind::Delta
                         ? "delta"
                         : "gaussian"},
            {"center_p_over_q", dist.center_p_over_q}};
    if (dist.kind == MomentumDistribution::Kind::Gaussian)
      dj["width_dp_over_q"] = dist.width_dp_over_q;
    json q{{"theta", params.pump_theta},
           {"Na", params.loss_inverse_Na},
           {"distribution", dj}};
    if (params.recoil_input == QuantumOscParams::RecoilInput::AlphaAtNa)
      q["alpha_at_Na"] = params.alpha_at_Na;
    else
      q["wrT"] = params.recoil_wrT;
    out["quantum"] = q;
  }
  out["tolerances"] = json{{"rel_tol", rel_tol}, {"steady_tol", steady_tol}};
  out["nmax_policy"] =
      json{{"start_extra", nmax.start_extra}, {"hard_cap", nmax.hard_cap}};
  if (has_sweep) {
    out["sweep"] = json{{"scenario", scenario == SweepScenario::ThetaVsMomentum
                                         ? "momentum_center"
                                         : "momentum_width"},
                        {"theta", axis_json(theta_axis)},
                        {"axis2", axis_json(sweep_axis2)}};
  }
  out["dynamics"] =
      json{{"pump", pump == PumpModel::PoissonEnsemble ? "ensemble" : "kicks"},
           {"max_kicks", max_kicks}};
  out["classical"] = json{{"wrT", classical_wrT}, {"delta", classical_delta}};
  out["design"] = json{{"lambda_L", design.lambda_L},
                       {"lambda_W", design.lambda_W},
                       {"G1", design.gain_G1},
                       {"wrT", design.recoil_wrT},
                       {"kpL", design.kpL_target},
                       {"RspL", design.RspL_target},
                       {"delta", design.delta},
                       {"f_rep", design.f_rep},
                       {"tau_e", design.tau_e},
                       {"phi", design.phi},
                       {"vartheta", design.vartheta},
                       {"operating_point", operating_point}};
  out["feasibility"] =
      json{{"sigma", axis_json(sigma_axis)}, {"eps", axis_json(eps_axis)}};
  return out;
}

}  // namespace qfel
