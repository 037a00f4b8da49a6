#pragma once

#include <array>
#include <vector>

#include "qfel/quantum_stats.hpp"

namespace qfel {

// Classical-regime configuration. The Fokker-Planck result behind the
// classical Fano factor assumes small recoil; validity is flagged, not
// enforced.
struct ClassicalParams {
  double recoil_wrT = 0.2;
  double delta_cl = 0.05;
  double loss_inverse_Na = 0.0;

  bool classical_validity() const { return recoil_wrT < 0.5; }
  bool delta_boundary() const { return delta_cl >= 1.0; }
};

// Classical small-signal gain (16/pi^3) wrT G1; vanishes with the recoil
// asymmetry.
double madey_gain(double linear_gain_quantum, double recoil_wrT);

// Classical small-signal Fano factor (pi/4) / (wrT delta_cl).
double classical_fano(double recoil_wrT, double delta_cl);

// Discrete Gaussian surrogate for the classical steady state: given mean,
// variance = classical_fano * mean, truncated at mean +- 10 standard
// deviations and renormalized.
PhotonStatistics classical_gaussian(double mean, double recoil_wrT,
                                    double delta_cl);

// Poisson reference point, log-domain for large means.
double poisson_pmf(long n, double mean);

// Side-by-side comparison at equal mean: quantum statistics, the classical
// Gaussian surrogate, and the Poisson distribution of the same mean.
struct FanoComparison {
  std::vector<std::array<double, 4>> rows;  // n, P_quantum, P_classical, P_poisson
  double fano_quantum = 0.0;
  double fano_classical = 0.0;
};

FanoComparison fano_comparison(const PhotonStatistics& quantum,
                               double recoil_wrT, double delta_cl);

}  // namespace qfel
