#include "minact/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "minact/errors.hpp"

namespace minact {

namespace {

// Returns (P_M(x), P_M'(x)) via the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int M, double x) {
  double p_prev = 1.0;
  double p = x;
  for (int n = 2; n <= M; ++n) {
    const double p_next = ((2.0 * n - 1.0) * x * p - (n - 1.0) * p_prev) / n;
    p_prev = p;
    p = p_next;
  }
  if (M == 0) return {1.0, 0.0};
  const double dp = M * (x * p - p_prev) / (x * x - 1.0);
  return {p, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int M, double a, double b) {
  if (M < 1) throw InvalidArgument("gauss_legendre: order must be >= 1, got " + std::to_string(M));
  if (!(a < b)) throw InvalidArgument("gauss_legendre: need a < b");

  // Roots on [-1, 1] in ascending order; only the non-negative half is solved for,
  // the rest follows from symmetry so paired weights come out identical.
  std::vector<double> x(M), w(M);
  const int half = (M + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-type initial guess for the i-th largest root.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (M + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, d] = legendre_with_derivative(M, z);
      dp = d;
      const double dz = p / d;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    dp = legendre_with_derivative(M, z).second;
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    x[M - 1 - i] = z;
    x[i] = -z;
    w[M - 1 - i] = weight;
    w[i] = weight;
  }
  if (M % 2 == 1) x[M / 2] = 0.0;

  QuadratureRule rule;
  rule.a = a;
  rule.b = b;
  rule.nodes.resize(M);
  rule.weights.resize(M);
  const double half_len = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < M; ++i) {
    rule.nodes[i] = mid + half_len * x[i];
    rule.weights[i] = half_len * w[i];
  }
  return rule;
}

}  // namespace minact
