#include "qfel/design.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace qfel {

using namespace constants;

void DesignInputs::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("non-positive ") + name);
  };
  positive(lambda_L, "lambda_L");
  positive(lambda_W, "lambda_W");
  positive(gain_G1, "gain_G1");
  positive(recoil_wrT, "recoil_wrT");
  positive(kpL_target, "kpL_target");
  positive(RspL_target, "RspL_target");
  positive(f_rep, "f_rep");
  positive(tau_e, "tau_e");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta outside (0, 1)");
  if (!(1.0 - std::cos(phi) > 1e-12))
    throw ConfigError("degenerate geometry: cos(phi) = 1");
  const double lhs = kpL_target * kpL_target * RspL_target;
  const double rhs = budget_identity_rhs();
  if (std::abs(lhs / rhs - 1.0) > 0.01) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "budget identity gate failed: (kpL)^2 RspL = %.6g vs "
                  "(2 alpha_f/3) G1 wrT = %.6g (beyond 1%%)",
                  lhs, rhs);
    throw ConfigError(msg);
  }
}

double recoil_parameter(double gamma0, double lambda_W, double L, double a0) {
  if (!(gamma0 >= 0.0 && lambda_W > 0.0 && L > 0.0 && a0 >= 0.0))
    throw ConfigError("recoil_parameter requires positive lambda_W, L");
  const double kW = 2.0 * pi / lambda_W;
  const double gamma_z = gamma0 / std::sqrt(1.0 + a0 * a0);
  return 8.0 * gamma_z * lambdabar_compton * kW * kW * L;
}

double plasma_kpL(double n_e, double gamma0, double L) {
  if (!(n_e >= 0.0 && gamma0 > 0.0 && L > 0.0))
    throw ConfigError("plasma_kpL requires positive gamma0, L");
  const double kp = std::sqrt(4.0 * pi * r_electron * n_e /
                              (gamma0 * gamma0 * gamma0));
  return kp * L;
}

double spontaneous_RspL(double a0, double lambda_W, double L) {
  if (!(a0 >= 0.0 && lambda_W > 0.0 && L > 0.0))
    throw ConfigError("spontaneous_RspL requires positive lambda_W, L");
  return (alpha_fine / 3.0) * a0 * a0 * (2.0 * pi / lambda_W) * L;
}

double resonance_wavelength(double gamma0, double a0, double lambda_W,
                            double phi, double vartheta) {
  if (!(gamma0 > 1.0)) throw ConfigError("gamma0 must exceed 1");
  const double geom = 1.0 - std::cos(phi);
  if (!(geom > 1e-12)) throw ConfigError("degenerate geometry: cos(phi) = 1");
  return lambda_W * (1.0 + a0 * a0 + gamma0 * gamma0 * vartheta * vartheta) /
         (2.0 * geom * gamma0 * gamma0);
}

double gain_bandwidth(double lambda_W, double L) {
  if (!(lambda_W > 0.0 && L > 0.0))
    throw ConfigError("gain_bandwidth requires positive inputs");
  return lambda_W / (4.0 * pi * L);
}

DesignReport solve_design_chain(const DesignInputs& inputs) {
  inputs.validate();
  DesignReport rep;

  // Project the budgets onto the identity, preserving their ratio. The
  // quoted 0.145 values are table-rounded; the identity fixes the product.
  const double scale = std::cbrt(
      inputs.budget_identity_rhs() /
      (inputs.kpL_target * inputs.kpL_target * inputs.RspL_target));
  rep.kpL = inputs.kpL_target * scale;
  rep.RspL = inputs.RspL_target * scale;

  const double kW = 2.0 * pi / inputs.lambda_W;
  const double geom = 2.0 * (1.0 - std::cos(inputs.phi));
  double gamma0 = 0.0, L = 0.0, a0 = 0.0;
  int it = 0;
  for (; it < 200; ++it) {
    // Resonance inverted for gamma0 at the current a0.
    const double denom =
        geom * inputs.lambda_L - inputs.lambda_W * inputs.vartheta * inputs.vartheta;
    if (!(denom > 0.0))
      throw ConfigError("resonance cannot be met: emission angle too large");
    const double gamma0_new =
        std::sqrt(inputs.lambda_W * (1.0 + a0 * a0) / denom);
    // Recoil inverted for L at the longitudinal gamma.
    const double gamma_z = gamma0_new / std::sqrt(1.0 + a0 * a0);
    const double L_new =
        inputs.recoil_wrT / (8.0 * gamma_z * lambdabar_compton * kW * kW);
    // Spontaneous-emission budget inverted for a0.
    const double a0_new =
        std::sqrt(rep.RspL / ((alpha_fine / 3.0) * kW * L_new));

    const double change = std::max(
        {gamma0 > 0.0 ? std::abs(gamma0_new / gamma0 - 1.0) : 1.0,
         L > 0.0 ? std::abs(L_new / L - 1.0) : 1.0,
         a0 > 0.0 ? std::abs(a0_new / a0 - 1.0) : 1.0});
    gamma0 = gamma0_new;
    L = L_new;
    a0 = a0_new;
    if (change < 1e-10) break;
  }
  if (it == 200) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "design chain did not converge; last iterate gamma0 %.6g, "
                  "L %.6g m, a0 %.6g",
                  gamma0, L, a0);
    throw NumericError(msg);
  }

  rep.gamma0 = gamma0;
  rep.L = L;
  rep.a0 = a0;
  rep.iterations = it + 1;
  // Space-charge budget inverted for the density.
  const double kp = rep.kpL / L;
  rep.n_e = kp * kp * gamma0 * gamma0 * gamma0 / (4.0 * pi * r_electron);
  rep.Gamma = gain_bandwidth(inputs.lambda_W, L);
  rep.g_sqrtN = std::sqrt(inputs.gain_G1) * c_light / L;
  return rep;
}

namespace {

ConstraintVerdict verdict(std::string name, double lhs, const char* relation,
                          double rhs) {
  ConstraintVerdict v;
  v.name = std::move(name);
  v.lhs = lhs;
  v.rhs = rhs;
  v.relation = relation;
  // Boundary-inclusive for the non-strict relations with a 1e-12 relative
  // slack: several operating-point rows sit exactly on their bound.
  const double slack = 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
  if (relation == std::string("<="))
    v.pass = lhs <= rhs + slack;
  else if (relation == std::string(">="))
    v.pass = lhs >= rhs - slack;
  else if (relation == std::string("<"))
    v.pass = lhs < rhs;
  else
    v.pass = lhs > rhs;
  const double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  v.margin = (relation[0] == '<' ? rhs - lhs : lhs - rhs) / denom;
  return v;
}

}  // namespace

void derive_operating_point(DesignReport& rep, const DesignInputs& inputs) {
  if (!(rep.gamma0 > 0.0 && rep.L > 0.0 && rep.a0 > 0.0))
    throw ConfigError("operating point requires solved fundamentals");
  const double G = rep.Gamma;

  // Emittance at the top of the coherence window; beam radius from the
  // divergence bound made binding.
  rep.eps_n = 10.0 * rep.gamma0 * inputs.lambda_L / (2.0 * pi);
  rep.sigma_e = rep.eps_n / std::sqrt(2.0 * G);
  rep.beta_star = rep.sigma_e * rep.sigma_e * rep.gamma0 / rep.eps_n;
  // Longitudinal alignment bound with dz = L/2 made binding.
  rep.z_R = (rep.L / 2.0) / std::sqrt(2.0 * G / (rep.a0 * rep.a0));
  rep.w0 = std::sqrt(rep.z_R * inputs.lambda_W / pi);
  rep.tau0 = 2.0 * rep.L / c_light;

  // a0 = kappa_a lambda_W[um] sqrt(I0[W/cm^2]), RMS convention.
  const double kappa_a = 0.855e-9 / std::numbers::sqrt2;
  const double lambda_um = inputs.lambda_W * 1e6;
  const double I0_W_cm2 = std::pow(rep.a0 / (kappa_a * lambda_um), 2.0);
  rep.I0 = I0_W_cm2 * 1e4;  // W/m^2
  rep.P0 = rep.I0 * pi * rep.w0 * rep.w0 / 2.0;

  rep.Ip = e_charge * rep.n_e * c_light * 2.0 * pi * rep.sigma_e * rep.sigma_e;
  rep.Qb = rep.Ip * inputs.tau_e;
  rep.N_electrons = rep.Qb / e_charge;

  rep.L_cav = c_light / (2.0 * inputs.f_rep);
  rep.R_mirror = 1.0 - (1.0 - inputs.delta) * inputs.gain_G1 / 2.0;
  rep.n_st = 3.0 * inputs.delta * rep.N_electrons / inputs.gain_G1;
  rep.n_out = (1.0 - rep.R_mirror) * rep.n_st;  // no absorption losses

  const double a02 = rep.a0 * rep.a0;
  rep.tolerances.dgamma0_rel = G;
  rep.tolerances.dlambdaW_rel = 2.0 * G;
  rep.tolerances.dI0_rel = 2.0 * G / a02;
  rep.tolerances.dz_over_zR = std::sqrt(2.0 * G / a02);
  rep.tolerances.dx_over_w0 = std::sqrt(G / a02);
  rep.tolerances.dLcav_rel = 2.0 * G;

  rep.sigma_max = std::pow(G / (2.0 * a02), 0.25) *
                  std::sqrt(inputs.lambda_W * rep.L) / (2.0 * pi);
  rep.sigma_1D = std::sqrt(rep.L * inputs.lambda_L);

  const double pauli_rhs =
      rep.sigma_e * std::sqrt(lambdabar_compton * lambdabar_compton *
                              lambdabar_compton * pi * rep.gamma0 * rep.n_e / G);
  const double window_lo = 0.5 * rep.gamma0 * inputs.lambda_L / (2.0 * pi);
  const double window_hi = 10.0 * rep.gamma0 * inputs.lambda_L / (2.0 * pi);

  rep.verdicts.clear();
  rep.verdicts.push_back(verdict("beam divergence: eps_n <= sigma_e sqrt(2 Gamma)",
                                 rep.eps_n, "<=",
                                 rep.sigma_e * std::sqrt(2.0 * G)));
  rep.verdicts.push_back(verdict("coherence window low: eps_n > gamma0 lambda_L / (4 pi)",
                                 rep.eps_n, ">", window_lo));
  rep.verdicts.push_back(verdict("coherence window high: eps_n <= 10 gamma0 lambda_L / (2 pi)",
                                 rep.eps_n, "<=", window_hi));
  rep.verdicts.push_back(verdict("divergence length: eps_n <= sigma_e^2 gamma0 / L",
                                 rep.eps_n, "<=",
                                 rep.sigma_e * rep.sigma_e * rep.gamma0 / rep.L));
  rep.verdicts.push_back(verdict("Pauli degeneracy: eps_n > sigma_e sqrt(lambdabar_C^3 pi gamma0 n_e / Gamma)",
                                 rep.eps_n, ">", pauli_rhs));
  rep.verdicts.push_back(verdict("1D regime: sigma_e > sqrt(L lambda_L)",
                                 rep.sigma_e, ">", rep.sigma_1D));
  rep.verdicts.push_back(verdict("emittance-dominated focus: sigma_e <= sigma_max",
                                 rep.sigma_e, "<=", rep.sigma_max));
  rep.verdicts.push_back(verdict("waist covers beam: w0 >= sqrt(2 pi) sigma_e",
                                 rep.w0, ">=",
                                 std::sqrt(2.0 * pi) * rep.sigma_e));
  rep.verdicts.push_back(verdict("Rayleigh covers undulator: 2 z_R >= L",
                                 2.0 * rep.z_R, ">=", rep.L));
  rep.verdicts.push_back(verdict("divergence length window low: L/2 < beta*",
                                 rep.L / 2.0, "<", rep.beta_star));
  rep.verdicts.push_back(verdict("divergence length window high: beta* < z_R",
                                 rep.beta_star, "<", rep.z_R));
  rep.verdicts.push_back(verdict("slippage: c tau_e > (L / lambda_W) lambda_L",
                                 c_light * inputs.tau_e, ">",
                                 rep.L / inputs.lambda_W * inputs.lambda_L));
  rep.operating_point_done = true;
}

std::vector<ConstraintVerdict> feasibility_verdicts_at(const DesignReport& rep,
                                                       const DesignInputs& inputs,
                                                       double sigma_e,
                                                       double eps_n) {
  // Derived from fundamentals only, so a report fresh out of
  // solve_design_chain works and the bounds respond to its Gamma.
  const double G = rep.Gamma;
  const double window_lo = 0.5 * rep.gamma0 * inputs.lambda_L / (2.0 * pi);
  const double window_hi = 10.0 * rep.gamma0 * inputs.lambda_L / (2.0 * pi);
  const double pauli_rhs =
      sigma_e * std::sqrt(lambdabar_compton * lambdabar_compton *
                          lambdabar_compton * pi * rep.gamma0 * rep.n_e / G);
  const double sigma_1d = std::sqrt(rep.L * inputs.lambda_L);
  const double sigma_max = std::pow(G / (2.0 * rep.a0 * rep.a0), 0.25) *
                           std::sqrt(inputs.lambda_W * rep.L) / (2.0 * pi);
  std::vector<ConstraintVerdict> v;
  v.push_back(verdict("divergence_length", eps_n, "<=",
                      sigma_e * sigma_e * rep.gamma0 / rep.L));
  v.push_back(verdict("window_low", eps_n, ">", window_lo));
  v.push_back(verdict("window_high", eps_n, "<=", window_hi));
  v.push_back(verdict("beam_divergence", eps_n, "<=",
                      sigma_e * std::sqrt(2.0 * G)));
  v.push_back(verdict("pauli", eps_n, ">", pauli_rhs));
  v.push_back(verdict("one_d_regime", sigma_e, ">", sigma_1d));
  v.push_back(verdict("focus", sigma_e, "<=", sigma_max));
  return v;
}

const char* const FeasibilityGrid::kBitNames[FeasibilityGrid::kConstraintCount] = {
    "divergence_length", "window_low", "window_high", "beam_divergence",
    "pauli",             "one_d",      "focus"};

FeasibilityGrid feasibility_scan(const DesignReport& report,
                                 const DesignInputs& inputs,
                                 const GridAxis& sigma_axis,
                                 const GridAxis& eps_axis, int threads) {
  if (!(report.gamma0 > 0.0 && report.L > 0.0))
    throw ConfigError("feasibility scan requires solved fundamentals");
  FeasibilityGrid grid;
  grid.sigma_axis = sigma_axis;
  grid.eps_axis = eps_axis;
  const long total = static_cast<long>(sigma_axis.count) * eps_axis.count;
  grid.masks.assign(total, 0);
  grid.feasible.assign(total, 0);

  int workers = threads;
  if (workers <= 0)
    workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = static_cast<int>(std::max<long>(1, std::min<long>(workers, total)));
  std::atomic<long> next{0};
  auto work = [&]() {
    for (;;) {
      const long idx = next.fetch_add(1);
      if (idx >= total) return;
      const int is = static_cast<int>(idx / eps_axis.count);
      const int ie = static_cast<int>(idx % eps_axis.count);
      const auto verdicts = feasibility_verdicts_at(
          report, inputs, sigma_axis.value(is), eps_axis.value(ie));
      unsigned char mask = 0;
      for (size_t b = 0; b < verdicts.size(); ++b)
        if (verdicts[b].pass) mask |= static_cast<unsigned char>(1u << b);
      grid.masks[idx] = mask;
      grid.feasible[idx] =
          mask == ((1u << FeasibilityGrid::kConstraintCount) - 1u) ? 1 : 0;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return grid;
}

}  // namespace qfel
