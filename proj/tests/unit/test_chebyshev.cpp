#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "minact/chebyshev.hpp"
#include "minact/errors.hpp"

using namespace minact;
using testing::Rng;

TEST_CASE("basis values") {
  CHECK(basis_value(3, 0.0) == 0.0);
  CHECK(basis_value(3, 1.0) == 0.0);
  CHECK(std::abs(basis_value(2, 0.5) + 2.0) < 1e-15);
  for (int k = 2; k <= 20; ++k) {
    CHECK(std::abs(basis_value(k, 0.0)) < 1e-12);
    CHECK(std::abs(basis_value(k, 1.0)) < 1e-12);
  }
}

TEST_CASE("basis matches the trigonometric form of T_k") {
  Rng rng(1);
  for (int k = 2; k <= 15; ++k)
    for (int i = 0; i < 10; ++i) {
      const double t = rng.uniform(0.0, 1.0);
      const double x = 2.0 * t - 1.0;
      const double expected = std::cos(k * std::acos(x)) - std::pow(-1.0, k) * (1.0 - t) - t;
      CHECK(std::abs(basis_value(k, t) - expected) < 1e-12);
    }
}

TEST_CASE("endpoint derivatives have closed forms") {
  CHECK(std::abs(basis_derivative(2, 1.0) - 8.0) < 1e-12);
  CHECK(std::abs(basis_derivative(2, 0.0) + 8.0) < 1e-12);
  for (int k = 2; k <= 20; ++k) {
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;  // (-1)^k
    CHECK(std::abs(basis_derivative(k, 1.0) - (2.0 * k * k + sgn - 1.0)) < 1e-10);
    CHECK(std::abs(basis_derivative(k, 0.0) - (2.0 * k * k * (-sgn) + sgn - 1.0)) < 1e-10);
  }
}

TEST_CASE("basis derivative matches finite differences") {
  Rng rng(2);
  for (int k : {2, 3, 6, 10})
    for (int i = 0; i < 20; ++i) {
      const double t = rng.uniform(1e-4, 1.0 - 1e-4);
      const double h = 1e-5;
      const double fd = (basis_value(k, t + h) - basis_value(k, t - h)) / (2 * h);
      CHECK(std::abs(basis_derivative(k, t) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("k < 2 is rejected") {
  CHECK_THROWS_AS(basis_value(1, 0.5), InvalidArgument);
  CHECK_THROWS_AS(basis_derivative(0, 0.5), InvalidArgument);
}

TEST_CASE("straight path when all coefficients vanish") {
  const ChebyshevPath p(testing::vec2(-1, 2), testing::vec2(3, 0.5), 6);
  for (double t : {0.0, 0.2, 0.77, 1.0}) {
    const PathState s = path_state(p, t);
    CHECK((s.w - ((1 - t) * p.w0 + t * p.w1)).norm() < 1e-15);
    CHECK((s.w_dot - (p.w1 - p.w0)).norm() < 1e-15);
  }
}

TEST_CASE("hard endpoint conditions hold for large coefficients") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ChebyshevPath p(rng.vec(2, -5, 5), rng.vec(2, -5, 5), rng.mat(2, 9, -1e3, 1e3));
    CHECK((path_state(p, 0.0).w - p.w0).norm() <= 1e-12);
    CHECK((path_state(p, 1.0).w - p.w1).norm() <= 1e-12);
  }
}

TEST_CASE("path velocity matches finite differences of the position") {
  Rng rng(4);
  const ChebyshevPath p(rng.vec(3, -1, 1), rng.vec(3, -1, 1), rng.mat(3, 7, -0.5, 0.5));
  for (int i = 0; i < 20; ++i) {
    const double t = rng.uniform(1e-3, 1 - 1e-3), h = 1e-6;
    const Vec fd = (path_state(p, t + h).w - path_state(p, t - h).w) / (2 * h);
    CHECK((path_state(p, t).w_dot - fd).norm() < 1e-6 * std::max(1.0, fd.norm()));
  }
  CHECK_THROWS_AS(path_state(p, 1.5), InvalidArgument);
  CHECK_THROWS_AS(path_state(p, -0.1), InvalidArgument);
}

TEST_CASE("basis cache") {
  const BasisCache c1 = build_cache(2, gauss_legendre(1));
  REQUIRE(c1.phi.rows() == 1);
  REQUIRE(c1.phi.cols() == 1);
  CHECK(std::abs(c1.phi(0, 0) + 2.0) < 1e-15);

  const BasisCache c = build_cache(10, gauss_legendre(50));
  CHECK(c.phi.rows() == 9);
  CHECK(c.phi.cols() == 50);
  CHECK(c.dphi.rows() == 9);
  CHECK(c.dphi.cols() == 50);
  for (int k = 2; k <= 10; ++k)
    for (int r = 0; r < 50; ++r) {
      CHECK(c.phi(k - 2, r) == basis_value(k, c.rule.nodes[r]));
      CHECK(c.dphi(k - 2, r) == basis_derivative(k, c.rule.nodes[r]));
    }
}

TEST_CASE("node evaluation and endpoint velocities agree with path_state") {
  Rng rng(5);
  const ChebyshevPath p(rng.vec(2, -1, 1), rng.vec(2, -1, 1), rng.mat(2, 5, -1, 1));
  const BasisCache c = build_cache(6, gauss_legendre(12));
  Mat P, V;
  path_nodes(p, c, P, V);
  for (int r = 0; r < 12; ++r) {
    const PathState s = path_state(p, c.rule.nodes[r]);
    CHECK((P.col(r) - s.w).norm() < 1e-13);
    CHECK((V.col(r) - s.w_dot).norm() < 1e-12);
  }
  CHECK((start_velocity(p) - path_state(p, 0.0).w_dot).norm() < 1e-12);
  CHECK((end_velocity(p) - path_state(p, 1.0).w_dot).norm() < 1e-12);
}
