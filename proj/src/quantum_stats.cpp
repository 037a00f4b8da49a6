#include "qfel/quantum_stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

namespace qfel {

double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double rabi_frequency_T(long n, double p_over_q, const QuantumOscParams& params) {
  if (n < 0) throw ConfigError("negative photon number");
  const double det = params.recoil_wrT * (p_over_q - 0.5);
  const double g2 = params.coupling_gT * params.coupling_gT * (n + 1.0);
  return std::sqrt(g2 + det * det);
}

namespace {

// <sinc^2(Omega_{n-1}(p) T)> for ratio index n (argument uses n, not n+1).
double averaged_sinc2(long n, const MomentumDistribution& dist,
                      const QuantumOscParams& params, double rel_tol) {
  const double gT = params.coupling_gT;
  const double g2n = gT * gT * static_cast<double>(n);
  const double wrT = params.recoil_wrT;
  return average(
      dist,
      [&](double p_over_q) {
        const double det = wrT * (p_over_q - 0.5);
        const double s = sinc(std::sqrt(g2n + det * det));
        return s * s;
      },
      rel_tol);
}

}  // namespace

double gain_ratio(long n, const MomentumDistribution& dist,
                  const QuantumOscParams& params, double rel_tol) {
  if (n < 1) throw ConfigError("gain ratio index must be >= 1");
  const double theta = params.pump_theta;
  return theta * theta * averaged_sinc2(n, dist, params, rel_tol);
}

void extend_gain_profile(GainProfile& profile, long upto,
                         const MomentumDistribution& dist,
                         const QuantumOscParams& params, double rel_tol) {
  const long have = static_cast<long>(profile.avg_sinc2.size());
  if (upto <= have) return;
  profile.avg_sinc2.reserve(upto);
  for (long n = have + 1; n <= upto; ++n)
    profile.avg_sinc2.push_back(averaged_sinc2(n, dist, params, rel_tol));
}

namespace {

PhotonStatistics vacuum_statistics() {
  PhotonStatistics st;
  st.log_weights = {0.0};
  st.probabilities = {1.0};
  st.n_max = 0;
  st.mean = 0.0;
  st.variance = 0.0;
  st.fano = 1.0;
  st.fano_by_convention = true;
  st.tail_mass_bound = 0.0;
  return st;
}

void fill_moments(PhotonStatistics& st) {
  double mean = 0.0;
  for (size_t n = 0; n < st.probabilities.size(); ++n)
    mean += static_cast<double>(n) * st.probabilities[n];
  double var = 0.0;
  for (size_t n = 0; n < st.probabilities.size(); ++n) {
    const double d = static_cast<double>(n) - mean;
    var += d * d * st.probabilities[n];
  }
  st.mean = mean;
  st.variance = var;
  if (mean > 0.0) {
    st.fano = var / mean;
    st.fano_by_convention = false;
  } else {
    st.fano = 1.0;
    st.fano_by_convention = true;
  }
}

// Geometric bound on the ratio envelope beyond n_max: r_n <= theta^2 from
// sinc^2 <= 1 and r_n <= N_a/n from sinc^2(x) <= 1/x^2 with x^2 >= (gT)^2 n.
double tail_ratio_bound(const QuantumOscParams& params, long n_max) {
  const double theta2 = params.pump_theta * params.pump_theta;
  return std::min(theta2, params.loss_inverse_Na / static_cast<double>(n_max + 1));
}

}  // namespace

PhotonStatistics photon_statistics(const MomentumDistribution& dist,
                                   const QuantumOscParams& params,
                                   double rel_tol, const NmaxPolicy& policy) {
  if (params.pump_theta == 0.0) return vacuum_statistics();

  const double theta2 = params.pump_theta * params.pump_theta;
  long n_max = static_cast<long>(
                   std::ceil(4.0 * params.loss_inverse_Na * theta2 / (theta2 + 1.0))) +
               policy.start_extra;
  GainProfile profile;
  for (;;) {
    if (n_max > policy.hard_cap) {
      char msg[128];
      std::snprintf(msg, sizeof msg,
                    "truncation cap %ld reached (theta %.6g, N_a %.6g)",
                    policy.hard_cap, params.pump_theta, params.loss_inverse_Na);
      throw NumericError(msg);
    }
    extend_gain_profile(profile, n_max, dist, params, rel_tol);

    PhotonStatistics st;
    st.n_max = n_max;
    st.log_weights.assign(n_max + 1, 0.0);
    double acc = 0.0;
    double max_lw = 0.0;
    for (long n = 1; n <= n_max; ++n) {
      acc += std::log(theta2 * profile.avg_sinc2[n - 1]);
      st.log_weights[n] = acc;
      max_lw = std::max(max_lw, acc);
    }
    st.probabilities.resize(n_max + 1);
    double norm = 0.0;
    for (long n = 0; n <= n_max; ++n) {
      st.probabilities[n] = std::exp(st.log_weights[n] - max_lw);
      norm += st.probabilities[n];
    }
    for (double& p : st.probabilities) p /= norm;

    const double q = tail_ratio_bound(params, n_max);
    const double r_last = theta2 * profile.avg_sinc2[n_max - 1];
    const double tail =
        q < 1.0 ? st.probabilities[n_max] * q / (1.0 - q)
                : std::numeric_limits<double>::infinity();
    if (r_last < 0.5 && tail < 1e-12) {
      st.tail_mass_bound = tail;
      fill_moments(st);
      return st;
    }
    n_max *= 2;
  }
}

PhotonStatistics statistics_from_distribution(std::vector<double> probabilities,
                                              double tail_mass_bound) {
  PhotonStatistics st;
  double norm = 0.0;
  for (double& p : probabilities) {
    if (p < 0.0) p = 0.0;
    norm += p;
  }
  if (!(norm > 0.0)) throw NumericError("distribution has no mass");
  for (double& p : probabilities) p /= norm;
  st.probabilities = std::move(probabilities);
  st.n_max = static_cast<long>(st.probabilities.size()) - 1;
  st.log_weights.resize(st.probabilities.size());
  for (size_t n = 0; n < st.probabilities.size(); ++n)
    st.log_weights[n] = std::log(st.probabilities[n]);
  st.tail_mass_bound = tail_mass_bound;
  fill_moments(st);
  return st;
}

double fano_small_signal(double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw ConfigError("delta outside (0, 1]");
  return 1.0 / delta;
}

double GridAxis::value(int i) const {
  if (count < 1) throw ConfigError("grid axis count must be >= 1");
  if (count == 1) return lo;
  const double t = static_cast<double>(i) / (count - 1);
  if (log_spaced) {
    if (!(lo > 0.0 && hi > 0.0))
      throw ConfigError("log-spaced axis requires positive bounds");
    return lo * std::pow(hi / lo, t);
  }
  return lo + (hi - lo) * t;
}

namespace {

std::string sanitize_status(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

SweepCell evaluate_cell(double theta, double a2, SweepScenario scenario,
                        const QuantumOscParams& base,
                        const MomentumDistribution& base_dist, double rel_tol) {
  SweepCell cell;
  cell.axis1 = theta;
  cell.axis2 = a2;
  if (theta == 0.0) {
    cell.mean_over_Na = 0.0;
    cell.fano = 1.0;
    cell.status = "vacuum";
    return cell;
  }
  try {
    QuantumOscParams p =
        base.recoil_input == QuantumOscParams::RecoilInput::AlphaAtNa
            ? QuantumOscParams::from_theta_Na_alpha(theta, base.loss_inverse_Na,
                                                    base.alpha_at_Na)
            : QuantumOscParams::from_theta_Na_wrT(theta, base.loss_inverse_Na,
                                                  base.recoil_wrT);
    MomentumDistribution d = base_dist;
    if (scenario == SweepScenario::ThetaVsMomentum) {
      d.center_p_over_q = a2;
    } else {
      d = MomentumDistribution::gaussian(base_dist.center_p_over_q, a2);
    }
    const PhotonStatistics st = photon_statistics(d, p, rel_tol);
    cell.mean_over_Na = st.mean / p.loss_inverse_Na;
    cell.fano = st.fano;
    cell.status = st.fano_by_convention ? "vacuum" : "ok";
  } catch (const std::exception& e) {
    cell.mean_over_Na = std::numeric_limits<double>::quiet_NaN();
    cell.fano = std::numeric_limits<double>::quiet_NaN();
    cell.status = sanitize_status(std::string("error: ") + e.what());
  }
  return cell;
}

}  // namespace

SweepGrid sweep(const GridAxis& theta_axis, const GridAxis& axis2,
                SweepScenario scenario, const QuantumOscParams& base,
                const MomentumDistribution& base_dist, double rel_tol,
                int threads) {
  if (theta_axis.count < 1 || axis2.count < 1)
    throw ConfigError("sweep axes need at least one sample");
  SweepGrid grid;
  grid.scenario = scenario;
  grid.axis1 = theta_axis;
  grid.axis2 = axis2;
  const long total = static_cast<long>(theta_axis.count) * axis2.count;
  grid.cells.resize(total);

  int workers = threads;
  if (workers <= 0)
    workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = static_cast<int>(std::max<long>(1, std::min<long>(workers, total)));

  std::atomic<long> next{0};
  auto work = [&]() {
    for (;;) {
      const long idx = next.fetch_add(1);
      if (idx >= total) return;
      const int i1 = static_cast<int>(idx / axis2.count);
      const int i2 = static_cast<int>(idx % axis2.count);
      grid.cells[idx] = evaluate_cell(theta_axis.value(i1), axis2.value(i2),
                                      scenario, base, base_dist, rel_tol);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return grid;
}

}  // namespace qfel
