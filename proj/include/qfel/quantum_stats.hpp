#pragma once

#include <string>
#include <vector>

#include "qfel/momentum.hpp"
#include "qfel/params.hpp"

namespace qfel {

// Steady-state photon-number distribution with moments. probabilities is
// normalized over 0..n_max; log_weights holds ln of the unnormalized weights
// (log_weights[0] = 0 for product-form results). tail_mass_bound bounds the
// neglected probability beyond n_max relative to the retained mass.
struct PhotonStatistics {
  std::vector<double> log_weights;
  std::vector<double> probabilities;
  long n_max = 0;
  double mean = 0.0;
  double variance = 0.0;
  double fano = 1.0;
  double tail_mass_bound = 0.0;
  // mean == 0 has no meaningful Fano factor; it is set to 1 (coherent-vacuum
  // convention) and flagged here.
  bool fano_by_convention = false;
};

// sin(x)/x, exact at 0 via series below |x| < 1e-4.
double sinc(double x);

// Omega_n(p) T = sqrt( (gT)^2 (n+1) + (wrT)^2 (p/q - 1/2)^2 ), the
// momentum-dependent Rabi frequency over the interaction time.
double rabi_frequency_T(long n, double p_over_q, const QuantumOscParams& params);

// Steady-state ratio r_n = P_n / P_{n-1}
//   = theta^2 < sinc^2(Omega_{n-1}(p) T) >_rho,  n >= 1.
double gain_ratio(long n, const MomentumDistribution& dist,
                  const QuantumOscParams& params, double rel_tol = 1e-10);

// Momentum-averaged sinc^2 factors shared by the product form and the
// master-equation pump: avg_sinc2[k-1] = < sinc^2(Omega_{k-1}(p) T) >.
struct GainProfile {
  std::vector<double> avg_sinc2;
};

// Extends profile.avg_sinc2 up to index n = upto (1-based ratio index).
void extend_gain_profile(GainProfile& profile, long upto,
                         const MomentumDistribution& dist,
                         const QuantumOscParams& params, double rel_tol);

// Truncation policy: start at ceil(4 N_a theta^2/(theta^2+1)) + start_extra,
// double until r_{n_max} < 0.5 and the geometric tail bound drops below
// 1e-12; hard cap on the array size.
struct NmaxPolicy {
  long start_extra = 64;
  long hard_cap = 10'000'000;
};

// Product-form steady state: ln P_n = sum_{k<=n} ln r_k up to normalization.
// Accumulated in the log domain; ratios reach ~N_a so direct products
// overflow. theta = 0 returns the vacuum with the Fano convention flag.
PhotonStatistics photon_statistics(const MomentumDistribution& dist,
                                   const QuantumOscParams& params,
                                   double rel_tol = 1e-10,
                                   const NmaxPolicy& policy = {});

// Builds a PhotonStatistics from an explicit distribution (clamped to >= 0
// and renormalized): moments, log weights, and the supplied tail bound.
PhotonStatistics statistics_from_distribution(std::vector<double> probabilities,
                                              double tail_mass_bound);

// Small-signal Fano factor 1/delta (Gaussian approximation).
double fano_small_signal(double delta);

// 2D parameter sweeps. Axis values are uniformly spaced (log_spaced switches
// to geometric spacing; used by the feasibility grid).
struct GridAxis {
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;
  bool log_spaced = false;

  double value(int i) const;
};

enum class SweepScenario { ThetaVsMomentum, ThetaVsWidth };

struct SweepCell {
  double axis1 = 0.0;
  double axis2 = 0.0;
  double mean_over_Na = 0.0;
  double fano = 1.0;
  std::string status;  // "ok", "vacuum", or an error description
};

// Row-major over (axis1, axis2): cells[i1 * axis2.count + i2].
struct SweepGrid {
  SweepScenario scenario = SweepScenario::ThetaVsMomentum;
  GridAxis axis1;  // theta
  GridAxis axis2;  // momentum center or Gaussian width, per scenario
  std::vector<SweepCell> cells;
};

// axis1 is always theta. ThetaVsMomentum re-centers base_dist at the axis2
// value; ThetaVsWidth swaps in a Gaussian of that width around the base
// center. Per-cell errors are recorded in the cell status and never abort
// the sweep. Deterministic for any thread count: cells are written by index.
SweepGrid sweep(const GridAxis& theta_axis, const GridAxis& axis2,
                SweepScenario scenario, const QuantumOscParams& base,
                const MomentumDistribution& base_dist, double rel_tol = 1e-10,
                int threads = 1);

}  // namespace qfel
