#include "minact/descent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minact/errors.hpp"

namespace minact {

namespace {

constexpr double kFlatTolerance = 1e-12;

[[noreturn]] void fail(const std::string& why, const Vec& last_good, int iteration) {
  throw OptimizationFailure(why, std::vector<double>(last_good.data(), last_good.data() + last_good.size()),
                            iteration);
}

}  // namespace

DescentResult block_descent(const ObjectiveFn& objective, Vec x, const std::vector<Block>& blocks,
                            const DescentOptions& opt, const IterationCallback& on_iteration) {
  if (!(opt.eta > 0.0) || !(opt.grad_tol > 0.0) || opt.max_iters < 0)
    throw InvalidArgument("block_descent: eta and grad_tol must be positive");
  if (!(opt.rel_tol >= 0.0) || opt.rel_window < 1) throw InvalidArgument("block_descent: bad stagnation settings");
  for (const auto& b : blocks)
    if (b.offset < 0 || b.size < 0 || b.offset + b.size > x.size())
      throw InvalidArgument("block_descent: block out of range");

  DescentResult res;
  Vec grad(x.size());
  double value = objective(x, &grad);
  if (!std::isfinite(value) || !grad.allFinite()) fail("objective not finite at the initial point", x, 0);
  res.history.push_back(value);

  std::vector<double> steps(blocks.size(), opt.eta / opt.growth);
  Vec trial(x.size()), trial_grad(x.size());

  int iter = 0;
  for (; iter < opt.max_iters; ++iter) {
    if (grad.norm() < opt.grad_tol) {
      res.converged = true;
      break;
    }

    if (!opt.backtracking) {
      const Vec previous = x;
      for (const auto& b : blocks) x.segment(b.offset, b.size) -= opt.eta * grad.segment(b.offset, b.size);
      value = objective(x, &grad);
      if (!std::isfinite(value) || !grad.allFinite())
        fail("objective diverged at iteration " + std::to_string(iter + 1), previous, iter + 1);
    } else {
      bool moved = false;
      for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const auto& b = blocks[bi];
        const auto g = grad.segment(b.offset, b.size);
        const double g2 = g.squaredNorm();
        if (g2 == 0.0) continue;
        double step = std::min(opt.eta, opt.growth * steps[bi]);
        for (int attempt = 0; attempt <= opt.max_backtracks; ++attempt, step *= opt.shrink) {
          trial = x;
          trial.segment(b.offset, b.size) -= step * g;
          const double tv = objective(trial, &trial_grad);
          if (!std::isfinite(tv) || !trial_grad.allFinite()) continue;
          bool accept = tv <= value - opt.armijo_c1 * step * g2;
          if (!accept && std::abs(tv - value) <= kFlatTolerance * (1.0 + std::abs(value))) {
            // Function differences are at rounding level; use the equivalent slope
            // test phi'(step) <= (1 - 2 c1) |g|^2 (approximate Armijo).
            const double slope = -trial_grad.segment(b.offset, b.size).dot(g);
            accept = slope <= (1.0 - 2.0 * opt.armijo_c1) * g2;
          }
          if (accept) {
            x.swap(trial);
            grad.swap(trial_grad);
            value = tv;
            steps[bi] = step;
            moved = true;
            break;
          }
        }
      }
      if (!moved) {
        res.stalled = true;
        res.history.push_back(value);
        if (on_iteration) on_iteration(iter + 1, x, value);
        ++iter;
        break;
      }
    }
    res.history.push_back(value);
    if (on_iteration) on_iteration(iter + 1, x, value);
    if (opt.rel_tol > 0.0 && static_cast<int>(res.history.size()) > opt.rel_window) {
      const double before = res.history[res.history.size() - 1 - opt.rel_window];
      if (before - value <= opt.rel_tol * std::max(1.0, std::abs(value))) {
        res.converged = res.stagnated = true;
        ++iter;
        break;
      }
    }
  }

  res.x = std::move(x);
  res.objective = value;
  res.iterations = iter;
  res.grad_norm = grad.norm();
  if (!res.converged && res.grad_norm < opt.grad_tol) res.converged = true;
  return res;
}

}  // namespace minact
