#pragma once

#include <functional>
#include <vector>

#include "minact/chebyshev.hpp"

namespace minact {

/// Settings shared by the pairwise and transport optimizers.
///
/// With `backtracking` on, parameter blocks are updated in turn, each with its
/// own Armijo line search. The first trial step of an iteration is
/// min(eta, growth * last accepted step of that block). With it off, every
/// block takes a plain step of size eta from the same gradient.
struct DescentOptions {
  double eta = 1.0;
  int max_iters = 20000;
  double grad_tol = 1e-6;
  bool backtracking = true;
  double shrink = 0.5;
  double armijo_c1 = 1e-4;
  double growth = 2.0;
  int max_backtracks = 60;
  // Stagnation stop: also declare convergence once the objective fell by less
  // than rel_tol * max(1, |J|) over the last rel_window iterations. 0 disables.
  double rel_tol = 0.0;
  int rel_window = 200;
};

/// Contiguous slice of the parameter vector updated as one unit.
struct Block {
  int offset;
  int size;
};

/// Returns the objective at x; writes the gradient into *grad when non-null.
using ObjectiveFn = std::function<double(const Vec& x, Vec* grad)>;

/// Called once per completed iteration with the current iterate and objective.
using IterationCallback = std::function<void(int iteration, const Vec& x, double objective)>;

struct DescentResult {
  Vec x;
  double objective = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  bool stalled = false;     // no block could decrease the objective any further
  bool stagnated = false;   // converged through the rel_tol test, not the gradient test
  std::vector<double> history;
};

/// Gradient descent over `blocks` of x. Throws OptimizationFailure when the
/// objective becomes NaN/inf, carrying the last finite iterate.
DescentResult block_descent(const ObjectiveFn& objective, Vec x, const std::vector<Block>& blocks,
                            const DescentOptions& options, const IterationCallback& on_iteration = {});

}  // namespace minact
