#include "qfel/classical.hpp"

#include <algorithm>
#include <cmath>

#include "qfel/constants.hpp"

namespace qfel {

double madey_gain(double linear_gain_quantum, double recoil_wrT) {
  if (!(linear_gain_quantum >= 0.0 && recoil_wrT >= 0.0))
    throw ConfigError("madey gain requires nonnegative inputs");
  return 16.0 / (constants::pi * constants::pi * constants::pi) * recoil_wrT *
         linear_gain_quantum;
}

double classical_fano(double recoil_wrT, double delta_cl) {
  if (!(recoil_wrT > 0.0)) throw ConfigError("non-positive wrT");
  if (!(delta_cl > 0.0 && delta_cl <= 1.0))
    throw ConfigError("delta_cl outside (0, 1]");
  return (constants::pi / 4.0) / (recoil_wrT * delta_cl);
}

PhotonStatistics classical_gaussian(double mean, double recoil_wrT,
                                    double delta_cl) {
  if (!(mean > 0.0)) throw ConfigError("non-positive mean");
  const double variance = classical_fano(recoil_wrT, delta_cl) * mean;
  const double sigma = std::sqrt(variance);
  const long lo = std::max<long>(0, static_cast<long>(std::floor(mean - 10.0 * sigma)));
  const long hi = static_cast<long>(std::ceil(mean + 10.0 * sigma));

  std::vector<double> p(hi + 1, 0.0);
  for (long n = lo; n <= hi; ++n) {
    const double d = static_cast<double>(n) - mean;
    p[n] = std::exp(-d * d / (2.0 * variance));
  }
  // Mass of the continuous Gaussian outside the +-10 sigma window.
  const double cut = std::erfc(10.0 / std::numbers::sqrt2);
  PhotonStatistics st = statistics_from_distribution(std::move(p), cut);
  return st;
}

double poisson_pmf(long n, double mean) {
  if (n < 0) throw ConfigError("negative photon number");
  if (!(mean > 0.0)) return n == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(n) * std::log(mean) - mean -
                  std::lgamma(static_cast<double>(n) + 1.0));
}

FanoComparison fano_comparison(const PhotonStatistics& quantum,
                               double recoil_wrT, double delta_cl) {
  if (!(quantum.mean > 0.0))
    throw ConfigError("comparison needs a non-vacuum quantum state");
  FanoComparison cmp;
  const PhotonStatistics cl =
      classical_gaussian(quantum.mean, recoil_wrT, delta_cl);
  cmp.fano_quantum = quantum.fano;
  cmp.fano_classical = cl.fano;
  const long n_top = std::max(quantum.n_max, cl.n_max);
  cmp.rows.reserve(n_top + 1);
  for (long n = 0; n <= n_top; ++n) {
    const double pq =
        n <= quantum.n_max ? quantum.probabilities[n] : 0.0;
    const double pc = n <= cl.n_max ? cl.probabilities[n] : 0.0;
    cmp.rows.push_back({static_cast<double>(n), pq, pc,
                        poisson_pmf(n, quantum.mean)});
  }
  return cmp;
}

}  // namespace qfel
