#pragma once

#include <vector>

#include "minact/chebyshev.hpp"

namespace minact {

/// Acceleration of the Euler-Lagrange flow for L = 1/2 |w_dot|^2 exp(|w|^2 / 2),
/// i.e. the standard Gaussian background with alpha = 1:
///   w_ddot = -(w . w_dot) w_dot + 1/2 |w_dot|^2 w.
Vec el_rhs(const Vec& w, const Vec& w_dot);

struct TrajectorySample {
  double t;
  Vec w;
  Vec w_dot;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // at the requested output times
  Vec w_end;                              // state at t = 1
  Vec w_dot_end;
  int steps = 0;      // accepted steps
  int rejected = 0;
};

struct IvpOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  int max_steps = 100000;
};

/// Integrates the flow from (x0, v) over t in [0, 1] with an embedded
/// Dormand-Prince 5(4) pair and PI step-size control. States at
/// `output_times` (each in [0, 1]) come from the pair's continuous extension.
/// Throws IntegrationFailure when the step size underflows.
Trajectory integrate_ivp(const Vec& x0, const Vec& v, const std::vector<double>& output_times,
                         const IvpOptions& options = {});

struct ShootingOptions {
  double eps = 1e-8;           // target for J(v) = 1/2 |w(1) - x1|^2
  int max_evaluations = 10000;
  double expand = 2.0;
  double shrink = 0.5;
  IvpOptions ivp;
  int n_samples = 101;         // uniform output samples of the final trajectory
};

struct ShootingResult {
  Vec v_star;
  Trajectory trajectory;
  double terminal_mismatch = 0.0;
  int ode_steps = 0;       // steps of the final reintegration
  int evaluations = 0;     // IVP solves spent by the search
};

/// Single shooting for the Gaussian alpha = 1 boundary-value problem. Starts
/// from v = x1 - x0 and runs a coordinate pattern search on J(v) until J <= eps.
/// Throws NoConvergence with the best J if the evaluation budget runs out.
ShootingResult shoot_bvp(const Vec& x0, const Vec& x1, const ShootingOptions& options = {});

/// Action of an oracle trajectory, sum_r q_r L(w_dot(t_r), w(t_r)) with the
/// trajectory resampled at the nodes of an M-point Gauss-Legendre rule.
double oracle_action(const Vec& x0, const Vec& v, int quadrature_order = 50, const IvpOptions& options = {});

}  // namespace minact
