#pragma once

#include <string>
#include <vector>

#include "qfel/constants.hpp"
#include "qfel/errors.hpp"
#include "qfel/quantum_stats.hpp"

namespace qfel {

// Laboratory-frame design targets. SI units throughout; conversions to the
// report's display units happen at the I/O boundary only.
struct DesignInputs {
  double lambda_L = 1.0e-10;   // laser wavelength (m)
  double lambda_W = 1.064e-6;  // undulator wavelength (m)
  double gain_G1 = 0.1;        // target linear gain
  double recoil_wrT = 2.0 * constants::pi;
  double kpL_target = 0.145;   // space-charge budget
  double RspL_target = 0.145;  // spontaneous-emission budget
  double delta = 0.01;         // loss-gain deviation for the cavity block
  double f_rep = 1.0e7;        // bunch repetition rate (Hz)
  double tau_e = 1.2e-12;      // bunch duration (s)
  double phi = constants::pi;  // collision angle (head-on)
  double vartheta = 0.0;       // emission angle

  // Consistency gate: the two budgets and the (gain, recoil) pair are tied by
  // (kpL)^2 (RspL) = (2 alpha_f / 3) G1 wrT; inputs may deviate by table
  // rounding up to 1%.
  void validate() const;
  double budget_identity_rhs() const {
    return (2.0 * constants::alpha_fine / 3.0) * gain_G1 * recoil_wrT;
  }
};

struct ConstraintVerdict {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string relation;  // "<=", "<", ">", ">="
  bool pass = false;
  double margin = 0.0;  // relative slack, >= 0 when passing
};

// Relative alignment/stability budgets implied by the gain bandwidth.
struct ToleranceBudgets {
  double dgamma0_rel = 0.0;   // energy spread <= Gamma
  double dlambdaW_rel = 0.0;  // undulator wavelength stability <= 2 Gamma
  double dI0_rel = 0.0;       // intensity stability <= 2 Gamma / a0^2
  double dz_over_zR = 0.0;    // longitudinal alignment <= sqrt(2 Gamma / a0^2)
  double dx_over_w0 = 0.0;    // transverse alignment <= sqrt(Gamma / a0^2)
  double dLcav_rel = 0.0;     // cavity length stability <= 2 Gamma
};

struct DesignReport {
  // Fundamental block.
  double gamma0 = 0.0;
  double L = 0.0;       // undulator interaction length (m)
  double a0 = 0.0;      // undulator strength
  double n_e = 0.0;     // electron density (1/m^3)
  double Gamma = 0.0;   // gain bandwidth
  double kpL = 0.0;     // budgets after projection onto the identity
  double RspL = 0.0;
  double g_sqrtN = 0.0;  // sqrt(G1) c / L, definitional coupling scale (1/s)
  int iterations = 0;

  // Operating point.
  double eps_n = 0.0;     // normalized emittance (m rad)
  double sigma_e = 0.0;   // beam radius (m)
  double beta_star = 0.0; // divergence length (m)
  double z_R = 0.0;       // Rayleigh length (m)
  double w0 = 0.0;        // waist (m)
  double tau0 = 0.0;      // undulator pulse duration (s)
  double I0 = 0.0;        // undulator intensity (W/m^2)
  double P0 = 0.0;        // undulator power (W)
  double Ip = 0.0;        // peak current (A)
  double Qb = 0.0;        // bunch charge (C)
  double N_electrons = 0.0;
  double L_cav = 0.0;     // cavity length (m)
  double R_mirror = 0.0;  // reflectivity
  double n_st = 0.0;      // steady-state photon number
  double n_out = 0.0;     // outcoupled photons per shot
  double sigma_max = 0.0; // focusing upper bound on sigma_e (m)
  double sigma_1D = 0.0;  // 1D-regime lower bound on sigma_e (m)

  ToleranceBudgets tolerances;
  std::vector<ConstraintVerdict> verdicts;
  bool operating_point_done = false;
};

// Recoil parameter wrT = 8 gamma_z (hbar / m_e c) (2 pi / lambda_W)^2 L for a
// head-on optical undulator, with the longitudinal Lorentz factor
// gamma_z = gamma0 / sqrt(1 + a0^2). The default a0 = 0 reproduces the bare
// closure anchor (Table values round-trip within 2%); the design chain passes
// the solved a0 so that the pulse-duration row closes within its 1% band.
double recoil_parameter(double gamma0, double lambda_W, double L, double a0 = 0.0);

// Space-charge budget k_p L with k_p = sqrt(4 pi r_e n_e / gamma0^3).
double plasma_kpL(double n_e, double gamma0, double L);

// Spontaneous-emission budget R_sp L with R_sp = (alpha_f / 3) a0^2 (2 pi / lambda_W).
double spontaneous_RspL(double a0, double lambda_W, double L);

// Backscattered resonance lambda_L = lambda_W (1 + a0^2 + gamma0^2 vartheta^2)
// / (2 (1 - cos phi) gamma0^2).
double resonance_wavelength(double gamma0, double a0, double lambda_W,
                            double phi = constants::pi, double vartheta = 0.0);

// Gain bandwidth Gamma = lambda_W / (4 pi L).
double gain_bandwidth(double lambda_W, double L);

// Fixed-point solve of the fundamental block (gamma0, L, a0, n_e): resonance,
// recoil, and spontaneous-emission relations inverted in turn from a0 = 0
// until stationary, then density from the space-charge budget. The two
// budgets are first rescaled (ratio preserved) onto the identity
// (kpL)^2 (RspL) = (2 alpha_f / 3) G1 wrT, so every solved report satisfies
// it exactly; the 1% input gate bounds the rescaling.
DesignReport solve_design_chain(const DesignInputs& inputs);

// Derives the full operating point and all constraint verdicts. Binding
// conventions: eps_n at the top of the coherence window, sigma_e from the
// divergence bound, z_R from the longitudinal alignment bound with
// dz = L / 2.
void derive_operating_point(DesignReport& report, const DesignInputs& inputs);

// Feasibility constraints evaluated at one (sigma_e, eps_n) candidate pair,
// in the mask bit order of feasibility_scan.
std::vector<ConstraintVerdict> feasibility_verdicts_at(const DesignReport& report,
                                                       const DesignInputs& inputs,
                                                       double sigma_e,
                                                       double eps_n);

struct FeasibilityGrid {
  GridAxis sigma_axis;  // log-spaced sigma_e (m)
  GridAxis eps_axis;    // log-spaced eps_n (m rad)
  // Row-major over (sigma, eps): masks[i_sigma * eps_axis.count + i_eps].
  std::vector<unsigned char> masks;
  std::vector<unsigned char> feasible;  // 1 iff all mask bits set

  static constexpr int kConstraintCount = 7;
  static const char* const kBitNames[kConstraintCount];
};

FeasibilityGrid feasibility_scan(const DesignReport& report,
                                 const DesignInputs& inputs,
                                 const GridAxis& sigma_axis,
                                 const GridAxis& eps_axis, int threads = 1);

}  // namespace qfel
