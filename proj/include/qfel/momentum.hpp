#pragma once

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "qfel/errors.hpp"

namespace qfel {

// Electron momentum distribution in units of the recoil q. Delta is a cold
// beam at center; Gaussian has standard deviation width (both as p/q).
struct MomentumDistribution {
  enum class Kind { Delta, Gaussian };
  Kind kind = Kind::Delta;
  double center_p_over_q = 0.5;
  double width_dp_over_q = 0.0;

  static MomentumDistribution delta(double center) {
    return {Kind::Delta, center, 0.0};
  }

  // Widths below 1e-12 are promoted to Delta: physically identical, and the
  // quadrature node count would otherwise be driven by pure roundoff.
  static MomentumDistribution gaussian(double center, double width) {
    if (!(width >= 0.0)) throw ConfigError("negative Gaussian width");
    if (width < 1e-12) return delta(center);
    return {Kind::Gaussian, center, width};
  }
};

// Gauss-Hermite rule for integral( exp(-t^2) f(t) dt ): sum w_i f(t_i).
struct GaussHermiteRule {
  int n = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached, thread-safe. Node counts used by average() are 32, 64, ..., 4096.
const GaussHermiteRule& gauss_hermite(int n);

inline constexpr int kQuadStartNodes = 32;
inline constexpr int kQuadMaxNodes = 4096;

// Momentum average integral( rho(p) f(p/q) dp ) with node-doubling refinement
// until successive estimates agree to rel_tol. Delta evaluates f exactly at
// the center. The standardized variable keeps the Gaussian weight exact, so
// refinement only tracks the smooth factor of the integrand.
template <class F>
double average(const MomentumDistribution& dist, F&& f, double rel_tol = 1e-10) {
  if (!(rel_tol > 1e-14 && rel_tol < 1e-2))
    throw ConfigError("quadrature rel_tol outside (1e-14, 1e-2)");
  if (dist.kind == MomentumDistribution::Kind::Delta)
    return f(dist.center_p_over_q);

  const double scale = std::numbers::sqrt2 * dist.width_dp_over_q;
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  double prev = 0.0, second_last = 0.0;
  bool have_prev = false;
  for (int m = kQuadStartNodes; m <= kQuadMaxNodes; m *= 2) {
    const GaussHermiteRule& rule = gauss_hermite(m);
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      acc += rule.weights[i] * f(dist.center_p_over_q + scale * rule.nodes[i]);
    const double est = acc * inv_sqrt_pi;
    if (have_prev &&
        std::abs(est - prev) <= rel_tol * std::max(std::abs(est), 1e-300))
      return est;
    second_last = prev;
    prev = est;
    have_prev = true;
  }
  char msg[160];
  std::snprintf(msg, sizeof msg,
                "momentum average not converged at %d nodes; last two estimates "
                "%.17g, %.17g",
                kQuadMaxNodes, second_last, prev);
  throw NumericError(msg);
}

}  // namespace qfel
