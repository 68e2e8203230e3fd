#pragma once

#include <vector>

namespace minact {

/// Gauss-Legendre rule on [a, b]. Nodes are strictly increasing.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = 0.0;
  double b = 1.0;

  int order() const { return static_cast<int>(nodes.size()); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t r = 0; r < nodes.size(); ++r) sum += weights[r] * f(nodes[r]);
    return sum;
  }
};

inline constexpr int kDefaultQuadratureOrder = 50;

/// M-point Gauss-Legendre rule mapped affinely to [a, b].
/// Exact for polynomials of degree <= 2M-1. Throws InvalidArgument if M < 1 or a >= b.
QuadratureRule gauss_legendre(int M, double a = 0.0, double b = 1.0);

}  // namespace minact
