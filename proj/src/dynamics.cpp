#include "qfel/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qfel {
namespace {

// Emission probabilities beta_k = (gT)^2 k <sinc^2>, k = 1..n_max, shared by
// the kick map and the ensemble generator.
std::vector<double> emission_probabilities(const GainProfile& profile,
                                           const QuantumOscParams& params,
                                           long n_max) {
  const double g2 = params.coupling_gT * params.coupling_gT;
  std::vector<double> beta(n_max + 1, 0.0);  // beta[0] unused (= 0)
  for (long k = 1; k <= n_max; ++k)
    beta[k] = g2 * static_cast<double>(k) * profile.avg_sinc2[k - 1];
  return beta;
}

// In-place micromaser kick. beta indexed 1..n_max; emission out of the top
// level is dropped (truncation boundary), conserving probability.
void apply_kick(std::vector<double>& p, const std::vector<double>& beta) {
  const long n_max = static_cast<long>(p.size()) - 1;
  double prev = p[0];  // P_{n-1} before update
  p[0] = p[0] * (1.0 - beta[1]);
  for (long n = 1; n <= n_max; ++n) {
    const double cur = p[n];
    const double emit_out = n < n_max ? beta[n + 1] : 0.0;
    p[n] = cur * (1.0 - emit_out) + prev * beta[n];
    prev = cur;
  }
}

// Damping generator rhs over dimensionless damping time s.
void damping_rhs(const std::vector<double>& p, std::vector<double>& out) {
  const long n_max = static_cast<long>(p.size()) - 1;
  for (long n = 0; n < n_max; ++n)
    out[n] = (n + 1.0) * p[n + 1] - static_cast<double>(n) * p[n];
  out[n_max] = -static_cast<double>(n_max) * p[n_max];
}

void damp_rk4(std::vector<double>& p, double s_total) {
  if (s_total <= 0.0) return;
  const long n_max = static_cast<long>(p.size()) - 1;
  const double h_cap = 0.1 / std::max<long>(n_max, 1);
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(s_total / h_cap)));
  const double h = s_total / static_cast<double>(steps);
  const size_t m = p.size();
  std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
  for (long s = 0; s < steps; ++s) {
    damping_rhs(p, k1);
    for (size_t i = 0; i < m; ++i) tmp[i] = p[i] + 0.5 * h * k1[i];
    damping_rhs(tmp, k2);
    for (size_t i = 0; i < m; ++i) tmp[i] = p[i] + 0.5 * h * k2[i];
    damping_rhs(tmp, k3);
    for (size_t i = 0; i < m; ++i) tmp[i] = p[i] + h * k3[i];
    damping_rhs(tmp, k4);
    for (size_t i = 0; i < m; ++i)
      p[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

void moments(const std::vector<double>& p, double& mean, double& fano) {
  mean = 0.0;
  for (size_t n = 0; n < p.size(); ++n) mean += static_cast<double>(n) * p[n];
  double var = 0.0;
  for (size_t n = 0; n < p.size(); ++n) {
    const double d = static_cast<double>(n) - mean;
    var += d * d * p[n];
  }
  fano = mean > 0.0 ? var / mean : 1.0;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

// Truncation sized like the closed form: grow until the ratio envelope
// r_n = theta^2 <sinc^2> falls below 0.5 with a sub-1e-12 geometric tail.
long sized_profile(GainProfile& profile, const MomentumDistribution& dist,
                   const QuantumOscParams& params, double rel_tol) {
  const double theta2 = params.pump_theta * params.pump_theta;
  long n_max =
      static_cast<long>(std::ceil(4.0 * params.loss_inverse_Na * theta2 /
                                  (theta2 + 1.0))) +
      64;
  for (;;) {
    if (n_max > 10'000'000) throw NumericError("oracle truncation cap reached");
    extend_gain_profile(profile, n_max, dist, params, rel_tol);
    const double q = std::min(theta2, params.loss_inverse_Na / (n_max + 1.0));
    if (theta2 * profile.avg_sinc2[n_max - 1] < 0.5 && q < 1.0) return n_max;
    n_max *= 2;
  }
}

double tail_bound(const std::vector<double>& p, const QuantumOscParams& params) {
  const long n_max = static_cast<long>(p.size()) - 1;
  const double theta2 = params.pump_theta * params.pump_theta;
  const double q = std::min(theta2, params.loss_inverse_Na / (n_max + 1.0));
  return q < 1.0 ? p[n_max] * q / (1.0 - q)
                 : std::numeric_limits<double>::infinity();
}

// One implicit-Euler step (I - h A) x = p of the ensemble master equation
//   dP_n/ds = N_a (beta_n P_{n-1} - beta_{n+1} P_n) + (n+1) P_{n+1} - n P_n ,
// solved by the Thomas algorithm. I - hA is a diagonally dominant M-matrix:
// the solve is stable, nonnegative, and exactly mass-preserving.
void implicit_step(std::vector<double>& p, const std::vector<double>& beta,
                   double Na, double h, std::vector<double>& cw,
                   std::vector<double>& dw) {
  const long n_max = static_cast<long>(p.size()) - 1;
  auto diag = [&](long n) {
    const double gain_out = n < n_max ? Na * beta[n + 1] : 0.0;
    return 1.0 + h * (gain_out + static_cast<double>(n));
  };
  // sub-diagonal a_n = -h Na beta_n, super-diagonal c_n = -h (n+1)
  cw[0] = (-h * 1.0) / diag(0);
  dw[0] = p[0] / diag(0);
  for (long i = 1; i <= n_max; ++i) {
    const double a = -h * Na * beta[i];
    const double denom = diag(i) - a * cw[i - 1];
    cw[i] = i < n_max ? (-h * (i + 1.0)) / denom : 0.0;
    dw[i] = (p[i] - a * dw[i - 1]) / denom;
  }
  p[n_max] = dw[n_max];
  for (long i = n_max - 1; i >= 0; --i) p[i] = dw[i] - cw[i] * p[i + 1];
  double norm = 0.0;
  for (double& v : p) {
    if (v < 0.0) v = 0.0;  // roundoff guard; the exact solve is nonnegative
    norm += v;
  }
  for (double& v : p) v /= norm;
}

}  // namespace

MasterEquationState gain_event(MasterEquationState state,
                               const MomentumDistribution& dist,
                               const QuantumOscParams& params, double rel_tol) {
  const long n_max = static_cast<long>(state.distribution.size()) - 1;
  if (n_max < 0) throw ConfigError("empty state");
  GainProfile profile;
  extend_gain_profile(profile, std::max<long>(n_max, 1), dist, params, rel_tol);
  const std::vector<double> beta =
      emission_probabilities(profile, params, std::max<long>(n_max, 1));
  apply_kick(state.distribution, beta);
  state.time += 1.0;
  state.injections_applied += 1;
  return state;
}

MasterEquationState damping_interval(MasterEquationState state,
                                     double duration_injection_intervals,
                                     const QuantumOscParams& params) {
  if (duration_injection_intervals < 0.0)
    throw ConfigError("negative damping duration");
  damp_rk4(state.distribution,
           duration_injection_intervals / params.loss_inverse_Na);
  state.time += duration_injection_intervals;
  return state;
}

PhotonStatistics run_to_steady_state(const MomentumDistribution& dist,
                                     const QuantumOscParams& params,
                                     double tol, long long max_kicks,
                                     PumpModel pump,
                                     std::vector<ConvergenceSample>* trace,
                                     double rel_tol) {
  if (!(tol > 0.0)) throw ConfigError("non-positive steady-state tolerance");
  if (params.pump_theta == 0.0) {
    // Vacuum is already stationary under pure damping.
    PhotonStatistics st = statistics_from_distribution({1.0}, 0.0);
    st.fano_by_convention = true;
    if (trace) trace->push_back({0, 0.0, 0.0, 1.0});
    return st;
  }

  GainProfile profile;
  const long n_max = sized_profile(profile, dist, params, rel_tol);
  const std::vector<double> beta =
      emission_probabilities(profile, params, n_max);
  const double Na = params.loss_inverse_Na;
  std::vector<double> p(n_max + 1, 0.0);
  p[0] = 1.0;

  if (pump == PumpModel::PoissonEnsemble) {
    std::vector<double> prev = p, cw(n_max + 1), dw(n_max + 1);
    double h = 1.0;
    double tv = std::numeric_limits<double>::infinity();
    const long long iter_cap = std::min<long long>(max_kicks, 400);
    for (long long it = 1; it <= iter_cap; ++it) {
      implicit_step(p, beta, Na, h, cw, dw);
      tv = tv_distance(p, prev);
      if (trace) {
        double mean, fano;
        moments(p, mean, fano);
        trace->push_back({static_cast<long>(it), tv, mean, fano});
      }
      if (tv < tol && it >= 4) {
        const double tb = tail_bound(p, params);
        return statistics_from_distribution(std::move(p), tb);
      }
      prev = p;
      h = std::min(h * 4.0, 1e8);
    }
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "steady state not reached after %lld iterations; last TV %.3e",
                  static_cast<long long>(iter_cap), tv);
    throw NumericError(msg);
  }

  // SequentialKicks: clockwork alternation, one damping slot per electron.
  const long cycle_len = std::max<long>(static_cast<long>(std::lround(Na)), 200);
  std::vector<double> ref = p;
  double tv = std::numeric_limits<double>::infinity();
  long cycle = 0;
  for (long long kick = 1; kick <= max_kicks; ++kick) {
    apply_kick(p, beta);
    damp_rk4(p, 1.0 / Na);
    if (kick % cycle_len == 0) {
      ++cycle;
      tv = tv_distance(p, ref);
      if (trace) {
        double mean, fano;
        moments(p, mean, fano);
        trace->push_back({cycle, tv, mean, fano});
      }
      if (tv < tol) {
        const double tb = tail_bound(p, params);
        return statistics_from_distribution(std::move(p), tb);
      }
      ref = p;
    }
  }
  char msg[128];
  std::snprintf(msg, sizeof msg,
                "steady state not reached after %lld kicks; last TV %.3e",
                max_kicks, tv);
  throw NumericError(msg);
}

}  // namespace qfel
