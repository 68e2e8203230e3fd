#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "minact/errors.hpp"
#include "minact/metric.hpp"
#include "minact/pairwise.hpp"

using namespace minact;
using testing::Rng;
using testing::vec2;

TEST_CASE("constant isotropic metric") {
  ConstantMetric half(0.5 * Mat::Identity(2, 2));
  const LagrangianTerms t = metric_lagrangian(half, vec2(0.3, -2), vec2(1, 1));
  CHECK(t.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((t.d_velocity - vec2(1, 1)).norm() < 1e-15);
  CHECK(t.d_position.norm() == 0.0);

  const ChebyshevPath p(vec2(0, 0), vec2(1, 2), Mat::Random(2, 9) * 0.1);
  for (double s : {0.0, 0.3, 1.0}) CHECK((metric_momentum(half, p, s) - path_state(p, s).w_dot).norm() < 1e-14);
}

TEST_CASE("isotropic density metric reproduces the density Lagrangian") {
  Rng rng(41);
  auto g = std::make_shared<StandardGaussian>();
  auto one = std::make_shared<ConstantDensity>(1.0);
  for (const auto& [model, alpha] : std::vector<std::pair<DensityPtr, double>>{{one, 1.0}, {g, 1.0}, {g, 0.7}}) {
    IsotropicDensityMetric metric(model, alpha, 2);
    const DensityLagrangian direct(*model, alpha);
    for (int i = 0; i < 10; ++i) {
      const Vec w = rng.vec(2, -2, 2), v = rng.vec(2, -1, 1);
      const LagrangianTerms a = metric_lagrangian(metric, w, v), b = direct.evaluate(w, v);
      CHECK(std::abs(a.value - b.value) <= 1e-12 * std::abs(b.value));
      CHECK((a.d_velocity - b.d_velocity).norm() <= 1e-12 * b.d_velocity.norm());
      CHECK((a.d_position - b.d_position).norm() <= 1e-12 * (1 + b.d_position.norm()));
    }
  }
}

TEST_CASE("metric position gradient matches finite differences") {
  Rng rng(42);
  const auto diag = quadratic_diagonal(2, 1.0, 1.0);
  auto g = std::make_shared<StandardGaussian>();
  IsotropicDensityMetric iso(g, 1.0, 2);
  for (int i = 0; i < 10; ++i) {
    const Vec w = rng.vec(2, -1.5, 1.5), v = rng.vec(2, -1, 1);
    for (const MetricField* field : {static_cast<const MetricField*>(diag.get()), static_cast<const MetricField*>(&iso)}) {
      const Vec fd = testing::fd_gradient([&](const Vec& x) { return metric_lagrangian(*field, x, v).value; }, w, 1e-6);
      CHECK(testing::rel_err(metric_lagrangian(*field, w, v).d_position, fd) < 1e-6);
      const Vec fdv = testing::fd_gradient([&](const Vec& x) { return metric_lagrangian(*field, w, x).value; }, v, 1e-6);
      CHECK(testing::rel_err(metric_lagrangian(*field, w, v).d_velocity, fdv) < 1e-6);
    }
    const MetricValue mv = diag->evaluate(w);
    CHECK((mv.G - mv.G.transpose()).norm() == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Mat>(mv.G).eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("invalid metrics are rejected") {
  CHECK_THROWS_AS(ConstantMetric(Mat::Identity(2, 2) * -1.0), InvalidMetric);
  Mat asym(2, 2);
  asym << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(ConstantMetric{asym}, InvalidMetric);
  const auto bad = quadratic_diagonal(2, -1.0, 1.0);
  CHECK_THROWS_AS(metric_lagrangian(*bad, vec2(0, 0), vec2(1, 0)), InvalidMetric);
}

TEST_CASE("solver through the metric interface matches the density solver") {
  auto g = std::make_shared<StandardGaussian>();
  IsotropicDensityMetric iso(g, 1.0, 2);
  const MetricLagrangian ml(iso);
  const Vec x0 = vec2(-1.2, 0.3), x1 = vec2(1.1, 0.4);
  // Per-node terms agree to rounding, so the iterates only drift apart by reassociation.
  PairwiseConfig cfg;
  cfg.grad_tol = 1e-9;
  cfg.max_iters = 100000;
  const PairwiseResult a = solve_pairwise(x0, x1, ml, cfg);
  const PairwiseResult b = solve_pairwise(x0, x1, *g, cfg);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(std::abs(a.action - b.action) <= 1e-12 * b.action);
  const EndpointMomentum em = endpoint_momentum(b.path, *g, 1.0);
  CHECK((metric_momentum(iso, b.path, 1.0) - em.end).norm() <= 1e-10 * em.end.norm());
  CHECK((metric_momentum(iso, b.path, 0.0) - em.start).norm() <= 1e-10 * em.start.norm());
}

TEST_CASE("constant metrics have straight geodesics") {
  Mat G(2, 2);
  G << 2.0, 0.7, 0.7, 1.0;
  ConstantMetric field(G);
  const MetricLagrangian ml(field);
  const PairwiseResult r = solve_pairwise(vec2(-1, 0.2), vec2(0.8, 1.3), ml, PairwiseConfig{});
  CHECK(r.converged);
  CHECK(r.path.coeffs.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("endpoint momentum is the derivative of the optimal action") {
  const auto diag = quadratic_diagonal(2, 1.0, 1.0);
  const MetricLagrangian ml(*diag);
  PairwiseConfig cfg;
  cfg.grad_tol = 1e-8;
  cfg.max_iters = 100000;
  const Vec x0 = vec2(-1, 0.3), x1 = vec2(1, 0.5);
  const PairwiseResult base = solve_pairwise(x0, x1, ml, cfg);
  REQUIRE(base.converged);
  const double h = 1e-3;
  Vec fd1(2), fd0(2);
  for (int i = 0; i < 2; ++i) {
    Vec e = Vec::Zero(2);
    e(i) = h;
    fd1(i) = (solve_pairwise(x0, x1 + e, ml, cfg).action - solve_pairwise(x0, x1 - e, ml, cfg).action) / (2 * h);
    fd0(i) = (solve_pairwise(x0 + e, x1, ml, cfg).action - solve_pairwise(x0 - e, x1, ml, cfg).action) / (2 * h);
  }
  CHECK(testing::rel_err(metric_momentum(*diag, base.path, 1.0), fd1) < 1e-3);
  CHECK(testing::rel_err(Vec(-metric_momentum(*diag, base.path, 0.0)), fd0) < 1e-3);
}
