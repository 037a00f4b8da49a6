#include "qfel/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace qfel {
namespace {

// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
// method, eigenvalues only. d holds the diagonal, e[i] the off-diagonal
// coupling (i, i+1) with e[n-1] unused as workspace.
void tridiag_eigenvalues(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter == 64) throw NumericError("tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
}

// Orthonormal Hermite value h_n(x) for the weight exp(-x^2), plus the sum of
// squares over orders 0..n-1 (the inverse Christoffel weight). Magnitudes grow
// like exp(x^2/2); once past the overflow guard the true quadrature weight
// underflows double precision anyway, so the caller records zero.
struct HermiteEval {
  double value_n = 0.0;      // h_n(x)
  double value_nm1 = 0.0;    // h_{n-1}(x)
  double sum_sq = 0.0;       // sum_{k<n} h_k(x)^2
  bool overflow = false;
};

HermiteEval hermite_orthonormal(int n, double x) {
  HermiteEval out;
  double hkm1 = 0.0;
  double hk = 1.0 / std::pow(std::numbers::pi, 0.25);
  double sum = hk * hk;
  for (int k = 0; k < n; ++k) {
    const double hkp1 =
        x * std::sqrt(2.0 / (k + 1.0)) * hk - std::sqrt(k / (k + 1.0)) * hkm1;
    hkm1 = hk;
    hk = hkp1;
    if (k + 1 < n) sum += hk * hk;
    if (std::abs(hk) > 1e250) {
      out.overflow = true;
      return out;
    }
  }
  out.value_n = hk;
  out.value_nm1 = hkm1;
  out.sum_sq = sum;
  return out;
}

std::unique_ptr<GaussHermiteRule> build_rule(int n) {
  // Jacobi matrix of the Hermite recurrence: zero diagonal, off-diagonal
  // sqrt(k/2). Eigenvalues are the nodes.
  std::vector<double> d(n, 0.0), e(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) e[i] = std::sqrt((i + 1) / 2.0);
  tridiag_eigenvalues(d, e);

  auto rule = std::make_unique<GaussHermiteRule>();
  rule->n = n;
  rule->nodes.resize(n);
  rule->weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = d[i];
    // Two Newton steps sharpen the QL eigenvalue to full precision:
    // h_n(x) = 0 at a node, h_n'(x) = sqrt(2n) h_{n-1}(x).
    for (int it = 0; it < 2; ++it) {
      const HermiteEval ev = hermite_orthonormal(n, x);
      if (ev.overflow) break;
      const double deriv = std::sqrt(2.0 * n) * ev.value_nm1;
      if (deriv == 0.0) break;
      x -= ev.value_n / deriv;
    }
    const HermiteEval ev = hermite_orthonormal(n, x);
    rule->nodes[i] = x;
    rule->weights[i] = ev.overflow ? 0.0 : 1.0 / ev.sum_sq;
  }
  // The rule is symmetric; enforce it exactly so averages of even integrands
  // carry no odd roundoff component.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double mag = 0.5 * (rule->nodes[j] - rule->nodes[i]);
    rule->nodes[i] = -mag;
    rule->nodes[j] = mag;
    const double w = 0.5 * (rule->weights[i] + rule->weights[j]);
    rule->weights[i] = w;
    rule->weights[j] = w;
  }
  if (n % 2 == 1) rule->nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int n) {
  if (n < 2) throw ConfigError("Gauss-Hermite rule needs at least 2 nodes");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return *it->second;
}

}  // namespace qfel
