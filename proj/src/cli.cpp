#include "qfel/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <json.hpp>

#include "qfel/classical.hpp"
#include "qfel/config.hpp"
#include "qfel/csv.hpp"
#include "qfel/design.hpp"
#include "qfel/dynamics.hpp"
#include "qfel/errors.hpp"
#include "qfel/quantum_stats.hpp"
#include "qfel/sha256.hpp"
#include "qfel/version.hpp"

namespace qfel {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct RunContext {
  RunConfig cfg;
  fs::path out_dir;
  std::string tag;
  int threads = 1;
  std::map<std::string, std::string> checksums;  // file name -> sha256
  json summary;

  fs::path artifact(const std::string& name) const { return out_dir / name; }

  void record(const fs::path& path) {
    checksums[path.filename().string()] = sha256_file(path.string());
    std::cout << "wrote " << path.string() << "\n";
  }
};

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

const QuantumOscParams& require_quantum(const RunContext& ctx) {
  if (!ctx.cfg.has_quantum)
    throw ConfigError("this subcommand needs a \"quantum\" config section");
  return ctx.cfg.params;
}

json stats_summary(const PhotonStatistics& ps) {
  return json{{"mean", ps.mean},
              {"variance", ps.variance},
              {"fano", ps.fano},
              {"fano_by_convention", ps.fano_by_convention},
              {"n_max", ps.n_max},
              {"tail_mass_bound", ps.tail_mass_bound}};
}

void write_distribution_csv(RunContext& ctx, const std::string& name,
                            const PhotonStatistics& ps) {
  const fs::path path = ctx.artifact(name);
  CsvWriter csv(path.string(), {"n", "P_n"});
  for (long n = 0; n <= ps.n_max; ++n)
    csv.row({std::to_string(n), format_float(ps.probabilities[n])});
  csv.close();
  ctx.record(path);
}

void run_stats(RunContext& ctx) {
  const QuantumOscParams& params = require_quantum(ctx);
  const PhotonStatistics ps =
      photon_statistics(ctx.cfg.dist, params, ctx.cfg.rel_tol, ctx.cfg.nmax);
  write_distribution_csv(ctx, "stats_" + ctx.tag + ".csv", ps);
  ctx.summary = stats_summary(ps);
}

void run_sweep(RunContext& ctx) {
  const QuantumOscParams& params = require_quantum(ctx);
  if (!ctx.cfg.has_sweep)
    throw ConfigError("sweep needs a \"sweep\" config section");
  const SweepGrid grid =
      sweep(ctx.cfg.theta_axis, ctx.cfg.sweep_axis2, ctx.cfg.scenario, params,
            ctx.cfg.dist, ctx.cfg.rel_tol, ctx.threads);

  const char* axis2_name = grid.scenario == SweepScenario::ThetaVsMomentum
                               ? "center_p_over_q"
                               : "width_dp_over_q";
  const fs::path path = ctx.artifact("sweep_" + ctx.tag + ".csv");
  CsvWriter csv(path.string(),
                {"theta", axis2_name, "mean_over_Na", "fano", "status"});
  long ok_cells = 0, sub_poissonian = 0;
  double min_fano = std::numeric_limits<double>::infinity();
  double min_fano_theta = 0.0, min_fano_axis2 = 0.0;
  for (const SweepCell& cell : grid.cells) {
    csv.row({format_float(cell.axis1), format_float(cell.axis2),
             format_float(cell.mean_over_Na), format_float(cell.fano),
             cell.status});
    if (cell.status == "ok") {
      ++ok_cells;
      if (cell.fano < 1.0) ++sub_poissonian;
      if (cell.fano < min_fano) {
        min_fano = cell.fano;
        min_fano_theta = cell.axis1;
        min_fano_axis2 = cell.axis2;
      }
    }
  }
  csv.close();
  ctx.record(path);
  ctx.summary = json{{"cells", grid.cells.size()},
                     {"ok_cells", ok_cells},
                     {"sub_poissonian_cells", sub_poissonian}};
  if (ok_cells > 0) {
    ctx.summary["min_fano"] = min_fano;
    ctx.summary["min_fano_theta"] = min_fano_theta;
    ctx.summary["min_fano_axis2"] = min_fano_axis2;
  }
}

void run_dynamics(RunContext& ctx) {
  const QuantumOscParams& params = require_quantum(ctx);
  std::vector<ConvergenceSample> trace;
  const PhotonStatistics ps = run_to_steady_state(
      ctx.cfg.dist, params, ctx.cfg.steady_tol, ctx.cfg.max_kicks,
      ctx.cfg.pump, &trace, ctx.cfg.rel_tol);
  write_distribution_csv(ctx, "dynamics_" + ctx.tag + ".csv", ps);

  const fs::path trace_path = ctx.artifact("dynamics_" + ctx.tag + "_trace.csv");
  CsvWriter csv(trace_path.string(), {"cycle", "tv_distance", "mean", "fano"});
  for (const ConvergenceSample& s : trace)
    csv.row({std::to_string(s.cycle), format_float(s.tv_distance),
             format_float(s.mean), format_float(s.fano)});
  csv.close();
  ctx.record(trace_path);

  ctx.summary = stats_summary(ps);
  ctx.summary["cycles"] = trace.size();
  // Cross-check against the closed-form steady state.
  const PhotonStatistics product =
      photon_statistics(ctx.cfg.dist, params, ctx.cfg.rel_tol, ctx.cfg.nmax);
  const double mean_ref = std::max(std::abs(product.mean), 1e-300);
  const double fano_ref = std::max(std::abs(product.fano), 1e-300);
  ctx.summary["product_form"] =
      json{{"mean", product.mean},
           {"fano", product.fano},
           {"mean_rel_diff", std::abs(ps.mean - product.mean) / mean_ref},
           {"fano_rel_diff", std::abs(ps.fano - product.fano) / fano_ref}};
}

void run_classical(RunContext& ctx) {
  const QuantumOscParams& params = require_quantum(ctx);
  const PhotonStatistics quantum =
      photon_statistics(ctx.cfg.dist, params, ctx.cfg.rel_tol, ctx.cfg.nmax);
  const FanoComparison comp = fano_comparison(quantum, ctx.cfg.classical_wrT,
                                              ctx.cfg.classical_delta);

  const fs::path path = ctx.artifact("classical_" + ctx.tag + ".csv");
  CsvWriter csv(path.string(), {"n", "P_quantum", "P_classical", "P_poisson"});
  for (const auto& row : comp.rows)
    csv.row({format_float(row[0]), format_float(row[1]), format_float(row[2]),
             format_float(row[3])});
  csv.close();
  ctx.record(path);

  ctx.summary = json{
      {"mean", quantum.mean},
      {"fano_quantum", comp.fano_quantum},
      {"fano_classical", comp.fano_classical},
      {"classical_fano_formula",
       classical_fano(ctx.cfg.classical_wrT, ctx.cfg.classical_delta)},
      {"gain_ratio_classical_to_quantum",
       madey_gain(1.0, ctx.cfg.classical_wrT)}};
}

json verdicts_json(const std::vector<ConstraintVerdict>& verdicts) {
  json arr = json::array();
  for (const ConstraintVerdict& v : verdicts)
    arr.push_back(json{{"name", v.name},
                       {"lhs", v.lhs},
                       {"rhs", v.rhs},
                       {"relation", v.relation},
                       {"pass", v.pass},
                       {"margin", v.margin}});
  return arr;
}

json report_json(const DesignReport& rep) {
  json out{{"gamma0", rep.gamma0},     {"L", rep.L},
           {"a0", rep.a0},             {"n_e", rep.n_e},
           {"Gamma", rep.Gamma},       {"kpL", rep.kpL},
           {"RspL", rep.RspL},         {"g_sqrtN", rep.g_sqrtN},
           {"iterations", rep.iterations}};
  if (rep.operating_point_done) {
    out["operating_point"] = json{
        {"eps_n", rep.eps_n},       {"sigma_e", rep.sigma_e},
        {"beta_star", rep.beta_star}, {"z_R", rep.z_R},
        {"w0", rep.w0},             {"tau0", rep.tau0},
        {"I0", rep.I0},             {"P0", rep.P0},
        {"Ip", rep.Ip},             {"Qb", rep.Qb},
        {"N_electrons", rep.N_electrons}, {"L_cav", rep.L_cav},
        {"R_mirror", rep.R_mirror}, {"n_st", rep.n_st},
        {"n_out", rep.n_out},       {"sigma_max", rep.sigma_max},
        {"sigma_1D", rep.sigma_1D}};
    out["tolerances"] = json{{"dgamma0_rel", rep.tolerances.dgamma0_rel},
                             {"dlambdaW_rel", rep.tolerances.dlambdaW_rel},
                             {"dI0_rel", rep.tolerances.dI0_rel},
                             {"dz_over_zR", rep.tolerances.dz_over_zR},
                             {"dx_over_w0", rep.tolerances.dx_over_w0},
                             {"dLcav_rel", rep.tolerances.dLcav_rel}};
    out["verdicts"] = verdicts_json(rep.verdicts);
  }
  return out;
}

void run_design(RunContext& ctx) {
  DesignReport rep = solve_design_chain(ctx.cfg.design);
  if (ctx.cfg.operating_point) derive_operating_point(rep, ctx.cfg.design);

  const fs::path path = ctx.artifact("design_" + ctx.tag + ".json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << report_json(rep).dump(2) << "\n";
  if (!out) throw IoError("write failure on " + path.string());
  out.close();
  ctx.record(path);

  bool all_pass = true;
  for (const ConstraintVerdict& v : rep.verdicts) all_pass = all_pass && v.pass;
  ctx.summary = json{{"gamma0", rep.gamma0},
                     {"L", rep.L},
                     {"a0", rep.a0},
                     {"n_e", rep.n_e},
                     {"Gamma", rep.Gamma},
                     {"verdicts", rep.verdicts.size()},
                     {"all_verdicts_pass", all_pass}};
}

void run_feasibility(RunContext& ctx) {
  DesignReport rep = solve_design_chain(ctx.cfg.design);
  derive_operating_point(rep, ctx.cfg.design);
  const FeasibilityGrid grid = feasibility_scan(
      rep, ctx.cfg.design, ctx.cfg.sigma_axis, ctx.cfg.eps_axis, ctx.threads);

  std::vector<std::string> header{"sigma_e", "eps_n", "feasible"};
  for (int b = 0; b < FeasibilityGrid::kConstraintCount; ++b)
    header.push_back(FeasibilityGrid::kBitNames[b]);
  const fs::path path = ctx.artifact("feasibility_" + ctx.tag + ".csv");
  CsvWriter csv(path.string(), header);
  long feasible_count = 0;
  for (int is = 0; is < grid.sigma_axis.count; ++is) {
    for (int ie = 0; ie < grid.eps_axis.count; ++ie) {
      const size_t idx = size_t(is) * grid.eps_axis.count + ie;
      std::vector<std::string> cells{format_float(grid.sigma_axis.value(is)),
                                     format_float(grid.eps_axis.value(ie)),
                                     grid.feasible[idx] ? "1" : "0"};
      for (int b = 0; b < FeasibilityGrid::kConstraintCount; ++b)
        cells.push_back((grid.masks[idx] >> b) & 1 ? "1" : "0");
      csv.row(cells);
      feasible_count += grid.feasible[idx];
    }
  }
  csv.close();
  ctx.record(path);

  // The derived operating point itself, judged by the same constraints.
  const std::vector<ConstraintVerdict> at_op =
      feasibility_verdicts_at(rep, ctx.cfg.design, rep.sigma_e, rep.eps_n);
  bool op_feasible = true;
  for (const ConstraintVerdict& v : at_op) op_feasible = op_feasible && v.pass;
  ctx.summary = json{{"cells", grid.masks.size()},
                     {"feasible_cells", feasible_count},
                     {"operating_sigma_e", rep.sigma_e},
                     {"operating_eps_n", rep.eps_n},
                     {"operating_point_feasible", op_feasible}};
}

}  // namespace

const char* subcommand_name(Command::Sub sub) {
  switch (sub) {
    case Command::Sub::Stats: return "stats";
    case Command::Sub::Sweep: return "sweep";
    case Command::Sub::Dynamics: return "dynamics";
    case Command::Sub::Classical: return "classical";
    case Command::Sub::Design: return "design";
    case Command::Sub::Feasibility: return "feasibility";
  }
  return "unknown";
}

int run(const Command& cmd) {
  try {
    RunContext ctx;
    ctx.cfg = cmd.config_path.empty() ? RunConfig{} : load_config(cmd.config_path);
    if (cmd.tolerance_override > 0.0) {
      if (!(cmd.tolerance_override > 1e-14 && cmd.tolerance_override < 1e-2))
        throw ConfigError("--tolerance outside (1e-14, 1e-2)");
      ctx.cfg.rel_tol = cmd.tolerance_override;
    }

    std::string out_dir = cmd.out_dir;
    if (out_dir.empty()) {
      const char* env = std::getenv("QFELO_OUT");
      out_dir = env && *env ? env : ".";
    }
    ctx.out_dir = out_dir;
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " +
                          ec.message());

    ctx.tag = cmd.tag.empty() ? utc_timestamp() : cmd.tag;
    ctx.threads = cmd.threads > 0
                      ? cmd.threads
                      : std::max(1u, std::thread::hardware_concurrency());

    switch (cmd.subcommand) {
      case Command::Sub::Stats: run_stats(ctx); break;
      case Command::Sub::Sweep: run_sweep(ctx); break;
      case Command::Sub::Dynamics: run_dynamics(ctx); break;
      case Command::Sub::Classical: run_classical(ctx); break;
      case Command::Sub::Design: run_design(ctx); break;
      case Command::Sub::Feasibility: run_feasibility(ctx); break;
    }

    json manifest{{"tool", "qfelo"},
                  {"version", kVersion},
                  {"subcommand", subcommand_name(cmd.subcommand)},
                  {"tag", ctx.tag},
                  {"created_utc", utc_timestamp()},
                  {"threads", ctx.threads},
                  {"config", ctx.cfg.resolved()},
                  {"summary", ctx.summary}};
    json files = json::object();
    for (const auto& [name, digest] : ctx.checksums) files[name] = digest;
    manifest["files"] = files;

    const fs::path manifest_path = ctx.out_dir / "manifest.json";
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + manifest_path.string());
    out << manifest.dump(2) << "\n";
    if (!out) throw IoError("write failure on " + manifest_path.string());
    out.close();
    std::cout << "wrote " << manifest_path.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace qfel
