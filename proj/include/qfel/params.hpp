#pragma once

#include <cmath>
#include <string>

#include "qfel/errors.hpp"

namespace qfel {

// Dimensionless oscillator parameters. theta = gT * sqrt(N_a) is the pump,
// N_a the number of electrons interacting per cavity decay time, wrT the
// recoil parameter. Immutable after construction; validated by the factories.
struct QuantumOscParams {
  double pump_theta = 0.0;
  double loss_inverse_Na = 1.0;
  double recoil_wrT = 1.0;
  double coupling_gT = 0.0;  // theta / sqrt(N_a)

  // Records which third degree of freedom the caller fixed. Sweeps over theta
  // keep that quantity fixed per cell: with AlphaAtNa the recoil parameter
  // scales as wrT = theta / alpha, with WrT it stays constant.
  enum class RecoilInput { WrT, AlphaAtNa };
  RecoilInput recoil_input = RecoilInput::WrT;
  double alpha_at_Na = 0.0;  // set when recoil_input == AlphaAtNa

  static QuantumOscParams from_theta_Na_wrT(double theta, double Na, double wrT) {
    validate_common(theta, Na);
    if (!(wrT > 0.0)) throw ConfigError("non-positive wrT");
    QuantumOscParams p;
    p.pump_theta = theta;
    p.loss_inverse_Na = Na;
    p.recoil_wrT = wrT;
    p.coupling_gT = theta / std::sqrt(Na);
    p.recoil_input = RecoilInput::WrT;
    return p;
  }

  // alpha_at_Na = gT sqrt(N_a) / wrT = theta / wrT. For theta = 0 the recoil
  // parameter is unconstrained (pump off); a placeholder value is stored.
  static QuantumOscParams from_theta_Na_alpha(double theta, double Na, double alpha) {
    validate_common(theta, Na);
    if (!(alpha > 0.0)) throw ConfigError("non-positive alpha_at_Na");
    QuantumOscParams p;
    p.pump_theta = theta;
    p.loss_inverse_Na = Na;
    p.recoil_wrT = theta > 0.0 ? theta / alpha : 1.0;
    p.coupling_gT = theta / std::sqrt(Na);
    p.recoil_input = RecoilInput::AlphaAtNa;
    p.alpha_at_Na = alpha;
    return p;
  }

  // Quantum parameter alpha_n = gT sqrt(n) / wrT, monotone in n.
  double quantum_alpha_at(double n) const {
    return coupling_gT * std::sqrt(n) / recoil_wrT;
  }

  // Validity metadata: two-momentum-level regime and small-signal pump.
  bool quantum_regime() const { return quantum_alpha_at(loss_inverse_Na) < 1.0; }
  bool small_signal() const { return pump_theta < 1.0; }

 private:
  static void validate_common(double theta, double Na) {
    if (!(theta >= 0.0)) throw ConfigError("negative theta");
    if (!(Na > 0.0)) throw ConfigError("non-positive N_a");
  }
};

// Relative deviation of losses from the linear gain, delta = (G1 - loss)/G1.
struct ThresholdDeviation {
  double delta = 0.0;
  double linear_gain = 0.0;  // G1 = (gT)^2 N

  // Above-threshold small-signal regime.
  bool small_signal_flagged() const { return delta > 0.0 && delta <= 0.2; }
};

// Coupling that realizes a target threshold deviation delta: losses equal
// (1 - delta) times the gain at n = 1, i.e. N_a sin^2(gT) = 1/(1 - delta).
inline double gT_for_threshold_deviation(double delta, double Na) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta outside (0, 1)");
  if (!(Na > 0.0)) throw ConfigError("non-positive N_a");
  const double s2 = 1.0 / ((1.0 - delta) * Na);
  if (s2 > 1.0) throw ConfigError("N_a too small to realize delta: (1-delta)*N_a < 1");
  return std::asin(std::sqrt(s2));
}

}  // namespace qfel
