#include "minact/pairwise.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "minact/errors.hpp"

namespace minact {

namespace {

void check_cache(const ChebyshevPath& path, const BasisCache& cache) {
  if (path.n_cheb() != cache.n_cheb())
    throw InvalidArgument("path has N_cheb = " + std::to_string(path.n_cheb()) + " but the cache was built for " +
                          std::to_string(cache.n_cheb()));
}

[[noreturn]] void range_error(int node) {
  throw NumericalRangeError("Lagrangian is not finite at quadrature node " + std::to_string(node) +
                                " (density out of range for rho^-alpha)",
                            node);
}

}  // namespace

double discrete_action(const ChebyshevPath& path, const Lagrangian& lagrangian, const BasisCache& cache) {
  check_cache(path, cache);
  Mat pos, vel;
  path_nodes(path, cache, pos, vel);
  double sum = 0.0;
  for (int r = 0; r < cache.n_nodes(); ++r) {
    const double L = lagrangian.evaluate(pos.col(r), vel.col(r)).value;
    if (!std::isfinite(L)) range_error(r);
    sum += cache.rule.weights[r] * L;
  }
  return sum;
}

double discrete_action(const ChebyshevPath& path, const DensityModel& model, double alpha, const BasisCache& cache) {
  return discrete_action(path, DensityLagrangian(model, alpha), cache);
}

ActionGradient action_gradient(const ChebyshevPath& path, const Lagrangian& lagrangian, const BasisCache& cache) {
  check_cache(path, cache);
  const int d = path.dim();
  const int M = cache.n_nodes();
  Mat pos, vel;
  path_nodes(path, cache, pos, vel);

  // Weighted node derivatives; the chain rule through the basis is then two products.
  Mat dv(d, M), dw(d, M);
  ActionGradient out;
  out.action = 0.0;
  for (int r = 0; r < M; ++r) {
    const LagrangianTerms terms = lagrangian.evaluate(pos.col(r), vel.col(r));
    if (!std::isfinite(terms.value) || !terms.d_velocity.allFinite() || !terms.d_position.allFinite())
      range_error(r);
    const double q = cache.rule.weights[r];
    out.action += q * terms.value;
    dv.col(r) = q * terms.d_velocity;
    dw.col(r) = q * terms.d_position;
  }
  out.d_coeffs = dv * cache.dphi.transpose() + dw * cache.phi.transpose();

  // w_r = (1-t_r) w0 + t_r w1 + ..., w_dot_r = w1 - w0 + ...
  out.d_start = Vec::Zero(d);
  out.d_end = Vec::Zero(d);
  for (int r = 0; r < M; ++r) {
    const double t = cache.rule.nodes[r];
    out.d_start += (1.0 - t) * dw.col(r) - dv.col(r);
    out.d_end += t * dw.col(r) + dv.col(r);
  }
  return out;
}

Mat action_grad_coeffs(const ChebyshevPath& path, const DensityModel& model, double alpha, const BasisCache& cache) {
  return action_gradient(path, DensityLagrangian(model, alpha), cache).d_coeffs;
}

EndpointMomentum endpoint_momentum(const ChebyshevPath& path, const Lagrangian& lagrangian) {
  return {lagrangian.evaluate(path.w0, start_velocity(path)).d_velocity,
          lagrangian.evaluate(path.w1, end_velocity(path)).d_velocity};
}

EndpointMomentum endpoint_momentum(const ChebyshevPath& path, const DensityModel& model, double alpha) {
  return endpoint_momentum(path, DensityLagrangian(model, alpha));
}

void PairwiseConfig::validate() const {
  if (!(alpha >= 0.0)) throw InvalidArgument("pairwise: alpha must be >= 0");
  if (!(lambda > 0.0)) throw InvalidArgument("pairwise: lambda must be > 0");
  if (!(eta > 0.0)) throw InvalidArgument("pairwise: eta must be > 0");
  if (n_cheb < 2) throw InvalidArgument("pairwise: N_cheb must be >= 2");
  if (quadrature_order < 1) throw InvalidArgument("pairwise: quadrature order must be >= 1");
  if (max_iters < 0) throw InvalidArgument("pairwise: max_iters must be >= 0");
  if (!(grad_tol > 0.0)) throw InvalidArgument("pairwise: grad_tol must be > 0");
}

namespace {

// Parameter layout: [w0 (d) | w1 (d) | a_2 .. a_N (d each)].
Vec pack(const ChebyshevPath& p) {
  const int d = p.dim();
  Vec x(2 * d + p.coeffs.size());
  x.segment(0, d) = p.w0;
  x.segment(d, d) = p.w1;
  x.segment(2 * d, p.coeffs.size()) = p.coeffs.reshaped();
  return x;
}

void unpack(const Vec& x, ChebyshevPath& p) {
  const int d = p.dim();
  p.w0 = x.segment(0, d);
  p.w1 = x.segment(d, d);
  p.coeffs = x.segment(2 * d, p.coeffs.size()).reshaped(d, p.coeffs.cols());
}

}  // namespace

PairwiseResult solve_pairwise_from(const ChebyshevPath& start, const Vec& x0, const Vec& x1,
                                   const Lagrangian& lagrangian, const PairwiseConfig& cfg) {
  cfg.validate();
  if (x0.size() != x1.size() || start.dim() != x0.size())
    throw InvalidArgument("solve_pairwise: dimension mismatch");
  if (start.n_cheb() != cfg.n_cheb) throw InvalidArgument("solve_pairwise: starting path has the wrong N_cheb");

  const int d = static_cast<int>(x0.size());
  PairwiseResult res;
  if (x0 == x1 && start.w0 == x0 && start.w1 == x1 && start.coeffs.isZero(0.0)) {
    res.path = start;
    return res;
  }

  const BasisCache cache = build_cache(cfg.n_cheb, gauss_legendre(cfg.quadrature_order, 0.0, 1.0));
  ChebyshevPath work = start;

  const ObjectiveFn objective = [&](const Vec& x, Vec* grad) -> double {
    unpack(x, work);
    ActionGradient g;
    try {
      g = action_gradient(work, lagrangian, cache);
    } catch (const NumericalRangeError&) {
      return std::numeric_limits<double>::infinity();
    }
    const Vec off0 = work.w0 - x0;
    const Vec off1 = work.w1 - x1;
    if (grad) {
      grad->resize(x.size());
      grad->segment(0, d) = g.d_start + 2.0 * cfg.lambda * off0;
      grad->segment(d, d) = g.d_end + 2.0 * cfg.lambda * off1;
      grad->segment(2 * d, g.d_coeffs.size()) = g.d_coeffs.reshaped();
    }
    return g.action + cfg.lambda * (off0.squaredNorm() + off1.squaredNorm());
  };

  DescentOptions opt;
  opt.eta = cfg.eta;
  opt.max_iters = cfg.max_iters;
  opt.grad_tol = cfg.grad_tol;
  opt.backtracking = cfg.backtracking;
  const std::vector<Block> blocks{{0, 2 * d}, {2 * d, static_cast<int>(start.coeffs.size())}};

  const DescentResult dr = block_descent(objective, pack(start), blocks, opt);
  res.path = start;
  unpack(dr.x, res.path);
  res.action = discrete_action(res.path, lagrangian, cache);
  res.objective = dr.objective;
  res.iterations = dr.iterations;
  res.final_grad_norm = dr.grad_norm;
  res.converged = dr.converged;
  res.objective_history = dr.history;
  return res;
}

PairwiseResult solve_pairwise(const Vec& x0, const Vec& x1, const Lagrangian& lagrangian, const PairwiseConfig& cfg) {
  cfg.validate();
  return solve_pairwise_from(ChebyshevPath(x0, x1, cfg.n_cheb), x0, x1, lagrangian, cfg);
}

PairwiseResult solve_pairwise(const Vec& x0, const Vec& x1, const DensityModel& model, const PairwiseConfig& cfg) {
  return solve_pairwise(x0, x1, DensityLagrangian(model, cfg.alpha), cfg);
}

}  // namespace minact
