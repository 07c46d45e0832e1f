#include "tcsim/quadrature.hpp"

#include <cmath>

#include "tcsim/errors.hpp"

namespace tcsim {

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ConfigError("gauss_legendre: need n >= 1");
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev initial guess, Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    rule.nodes[static_cast<std::size_t>(i)] = mid - half * x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = mid + half * x;
    rule.weights[static_cast<std::size_t>(i)] = half * w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = half * w;
  }
  return rule;
}

QuadRule gauss_hermite_normal(int n) {
  if (n < 1) throw ConfigError("gauss_hermite_normal: need n >= 1");
  // Physicists' Hermite nodes by Newton iteration, then rescaled so the rule
  // integrates against the N(0,1) density with unit total weight.
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[static_cast<std::size_t>(i - 2)];
    }
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = z;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
    const double w = 2.0 / (pp * pp);
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  // Hermite weight e^{-x^2} -> normal density: x = sqrt(2) u, weights / sqrt(pi).
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] *= std::sqrt(2.0);
    rule.weights[i] /= std::sqrt(M_PI);
    total += rule.weights[i];
  }
  // Renormalize the residual rounding so constants integrate exactly.
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace tcsim
