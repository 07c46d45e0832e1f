#pragma once

#include <vector>

namespace tcsim {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// Gauss-Hermite rule for integrals against the standard normal density:
// E f(Z) ~= sum w_i f(x_i) with sum w_i = 1.
QuadRule gauss_hermite_normal(int n);

}  // namespace tcsim
