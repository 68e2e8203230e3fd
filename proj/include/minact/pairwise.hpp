#pragma once

#include <vector>

#include "minact/chebyshev.hpp"
#include "minact/density.hpp"
#include "minact/descent.hpp"
#include "minact/lagrangian.hpp"

namespace minact {

/// Quadrature action sum_r q_r L(w_dot_r, w_r). Throws NumericalRangeError naming
/// the first node where the Lagrangian is not finite.
double discrete_action(const ChebyshevPath& path, const Lagrangian& lagrangian, const BasisCache& cache);
double discrete_action(const ChebyshevPath& path, const DensityModel& model, double alpha, const BasisCache& cache);

/// Discrete action with its exact partial derivatives in every path parameter.
struct ActionGradient {
  double action = 0.0;
  Mat d_coeffs;  // d x (N-1), column k-2 is dS/da_k
  Vec d_start;   // dS/dw0 with the coefficients held fixed
  Vec d_end;     // dS/dw1 with the coefficients held fixed
};

ActionGradient action_gradient(const ChebyshevPath& path, const Lagrangian& lagrangian, const BasisCache& cache);

/// dS/da_k for k = 2..N (columns).
Mat action_grad_coeffs(const ChebyshevPath& path, const DensityModel& model, double alpha, const BasisCache& cache);

/// Boundary momenta dL/dw_dot at t = 0 and t = 1. At a path stationary in its
/// interior coefficients these are -dS/dw0 and dS/dw1.
struct EndpointMomentum {
  Vec start;
  Vec end;
};

EndpointMomentum endpoint_momentum(const ChebyshevPath& path, const Lagrangian& lagrangian);
EndpointMomentum endpoint_momentum(const ChebyshevPath& path, const DensityModel& model, double alpha);

struct PairwiseConfig {
  double alpha = 1.0;
  double lambda = 1e5;  // endpoint penalty weight
  double eta = 1.0;     // step size (upper bound on trial steps when backtracking)
  int n_cheb = 10;
  int quadrature_order = kDefaultQuadratureOrder;
  int max_iters = 20000;
  double grad_tol = 1e-6;
  bool backtracking = true;

  void validate() const;
};

struct PairwiseResult {
  ChebyshevPath path;
  double action = 0.0;
  double objective = 0.0;
  int iterations = 0;
  double final_grad_norm = 0.0;
  bool converged = false;
  std::vector<double> objective_history;
};

/// Minimizes S + lambda (|w0 - x0|^2 + |w1 - x1|^2) starting from the straight
/// chord, alternating between the endpoint pair and the interior coefficients.
PairwiseResult solve_pairwise(const Vec& x0, const Vec& x1, const Lagrangian& lagrangian, const PairwiseConfig& cfg);
PairwiseResult solve_pairwise(const Vec& x0, const Vec& x1, const DensityModel& model, const PairwiseConfig& cfg);

/// Same as above with a caller-supplied starting path (endpoints included).
PairwiseResult solve_pairwise_from(const ChebyshevPath& start, const Vec& x0, const Vec& x1,
                                   const Lagrangian& lagrangian, const PairwiseConfig& cfg);

}  // namespace minact
