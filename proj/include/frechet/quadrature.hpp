#pragma once

#include <cmath>
#include <vector>

#include "frechet/common.hpp"

namespace frechet {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre nodes by Newton iteration from the Chebyshev initial guess.
// Exact for polynomials up to degree 2n-1; n = 256 resolves the smooth radial
// integrands used here to machine precision.
inline const QuadratureRule& gauss_legendre(int n) {
  static thread_local std::vector<QuadratureRule> cache;
  static thread_local std::vector<int> cached_n;
  for (std::size_t k = 0; k < cached_n.size(); ++k)
    if (cached_n[k] == n) return cache[k];

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence: p_k(x), derivative via p'_n = n(x p_n - p_{n-1})/(x^2-1).
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  cache.push_back(rule);
  cached_n.push_back(n);
  return cache.back();
}

// integral of f over [a, b].
template <class F>
double integrate(F&& f, double a, double b, int n = 256) {
  if (!(b > a)) return 0.0;
  const QuadratureRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

}  // namespace frechet
