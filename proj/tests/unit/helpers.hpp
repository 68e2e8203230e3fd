#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "minact/chebyshev.hpp"

namespace testing {

using minact::Mat;
using minact::Vec;

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
  Vec vec(Eigen::Index n, double a, double b) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(a, b);
    return v;
  }
  Mat mat(Eigen::Index r, Eigen::Index c, double a, double b) {
    Mat m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = uniform(a, b);
    return m;
  }
};

/// Central finite-difference gradient of f at x.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// |a - b| / max(|b|, floor), the vector version uses 2-norms.
inline double rel_err(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}
inline double rel_err(const Vec& a, const Vec& b, double floor = 1e-12) {
  return (a - b).norm() / std::max(b.norm(), floor);
}

}  // namespace testing
