#pragma once

#include <vector>

namespace cfm {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre: `tiles` equal sub-intervals of [a, b], n points each.
QuadratureRule composite_gauss(int tiles, int n, double a, double b);

}  // namespace cfm
