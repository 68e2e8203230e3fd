#include "minact/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minact/errors.hpp"
#include "minact/pairwise.hpp"

namespace minact {

double rbf_kernel(const Vec& s, const Vec& t, double bandwidth) {
  return std::exp(-(s - t).squaredNorm() / (2.0 * bandwidth * bandwidth));
}

double median_bandwidth(const Cloud& anchors) {
  std::vector<double> dist;
  for (Eigen::Index i = 0; i < anchors.cols(); ++i)
    for (Eigen::Index j = i + 1; j < anchors.cols(); ++j) dist.push_back((anchors.col(i) - anchors.col(j)).norm());
  if (dist.empty()) return 1.0;
  const auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  double h = *mid;
  if (dist.size() % 2 == 0) h = 0.5 * (h + *std::max_element(dist.begin(), mid));
  return h > 0.0 ? h : 1.0;
}

Mat gram_matrix(const Cloud& anchors, double bandwidth) {
  if (!(bandwidth > 0.0)) throw InvalidArgument("gram_matrix: bandwidth must be positive");
  const auto m = anchors.cols();
  Mat K(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    K(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < m; ++j) K(i, j) = K(j, i) = rbf_kernel(anchors.col(i), anchors.col(j), bandwidth);
  }
  return K;
}

ThetaField make_theta_field(const Cloud& anchors, int n_cheb, const KernelSpec& kernel) {
  if (n_cheb < 2) throw InvalidArgument("make_theta_field: N_cheb must be >= 2");
  if (anchors.cols() < 1) throw InvalidArgument("make_theta_field: need at least one anchor");
  ThetaField field;
  field.anchors = anchors;
  field.bandwidth = kernel.uses_median() ? median_bandwidth(anchors) : kernel.bandwidth;
  field.gram = gram_matrix(anchors, field.bandwidth);
  field.theta.assign(n_cheb - 1, Mat::Zero(anchors.rows(), anchors.cols()));
  return field;
}

Mat eval_coeff_field(const ThetaField& field, const Vec& s) {
  const int m = field.n_anchors();
  Vec k(m);
  for (int j = 0; j < m; ++j) k(j) = rbf_kernel(s, field.anchors.col(j), field.bandwidth);
  Mat out(field.dim(), field.theta.size());
  for (std::size_t i = 0; i < field.theta.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = field.theta[i] * k;
  return out;
}

std::vector<Mat> anchor_coefficients(const ThetaField& field) {
  std::vector<Mat> out;
  out.reserve(field.theta.size());
  for (const Mat& th : field.theta) out.push_back(th * field.gram);
  return out;
}

namespace {

void check_clouds(const ThetaField& field, const Cloud& W0, const Cloud& W1) {
  if (W0.cols() != field.n_anchors() || W1.cols() != field.n_anchors() || W0.rows() != field.dim() ||
      W1.rows() != field.dim())
    throw InvalidArgument("endpoint clouds must be d x m with m = number of anchors");
}

ChebyshevPath path_from(const std::vector<Mat>& coeffs, const Cloud& W0, const Cloud& W1, int j) {
  Mat a(W0.rows(), coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = coeffs[i].col(j);
  return ChebyshevPath(W0.col(j), W1.col(j), std::move(a));
}

}  // namespace

ChebyshevPath anchor_path(const ThetaField& field, const Cloud& W0, const Cloud& W1, int j) {
  check_clouds(field, W0, W1);
  return path_from(anchor_coefficients(field), W0, W1, j);
}

FamilyGradient family_action_and_grads(const ThetaField& field, const Cloud& W0, const Cloud& W1,
                                       const Lagrangian& lagrangian, const BasisCache& cache) {
  check_clouds(field, W0, W1);
  if (cache.n_cheb() != field.n_cheb()) throw InvalidArgument("family_action_and_grads: cache N_cheb mismatch");
  const int m = field.n_anchors();
  const int d = field.dim();
  const auto coeffs = anchor_coefficients(field);

  FamilyGradient out;
  out.d_anchor_coeffs.assign(field.theta.size(), Mat(d, m));
  out.d_start.resize(d, m);
  out.d_end.resize(d, m);
  for (int j = 0; j < m; ++j) {
    const ActionGradient g = action_gradient(path_from(coeffs, W0, W1, j), lagrangian, cache);
    out.action += g.action;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      out.d_anchor_coeffs[i].col(j) = g.d_coeffs.col(static_cast<Eigen::Index>(i));
    out.d_start.col(j) = g.d_start;
    out.d_end.col(j) = g.d_end;
  }
  // dS/dtheta_{k,j} = sum_j' K(s_j', s_j) dS/da_k(s_j').
  out.d_theta.reserve(coeffs.size());
  for (const Mat& da : out.d_anchor_coeffs) out.d_theta.push_back(da * field.gram);
  return out;
}

FamilyGradient family_action_and_grads(const ThetaField& field, const Cloud& W0, const Cloud& W1,
                                       const DensityModel& model, double alpha, const BasisCache& cache) {
  return family_action_and_grads(field, W0, W1, DensityLagrangian(model, alpha), cache);
}

TransportObjective transport_objective(const ThetaField& field, const Cloud& W0, const Cloud& W1,
                                       const Lagrangian& lagrangian, const BasisCache& cache,
                                       const PenaltyState& state0, const PenaltyState& state1, double lambda0,
                                       double lambda1) {
  FamilyGradient fam = family_action_and_grads(field, W0, W1, lagrangian, cache);
  TransportObjective out;
  out.action = fam.action;
  out.penalty0 = penalty_value(state0, W0);
  out.penalty1 = penalty_value(state1, W1);
  out.value = out.action + lambda0 * out.penalty0 + lambda1 * out.penalty1;
  out.d_theta = std::move(fam.d_theta);
  out.d_start = fam.d_start;
  out.d_end = fam.d_end;
  if (lambda0 != 0.0) out.d_start += lambda0 * penalty_grad(state0, W0);
  if (lambda1 != 0.0) out.d_end += lambda1 * penalty_grad(state1, W1);
  return out;
}

double lambda_heuristic(const Cloud& W, const Cloud& momenta, const PenaltyState& state, double sigma_star) {
  if (!(sigma_star > 0.0)) throw InvalidArgument("lambda_heuristic: sigma* must be positive");
  if (momenta.rows() != W.rows() || momenta.cols() != W.cols())
    throw InvalidArgument("lambda_heuristic: momenta must match the cloud shape");
  const Vec v = penalty_projection(state, W);
  const double sigma = v.norm();
  const double numerator = momenta.norm();

  double denom2 = 0.0;
  if (sigma > 1e-12 * std::sqrt(static_cast<double>(state.k_svd))) {
    const Vec Bv = state.B * (v / sigma);
    for (Eigen::Index i = 0; i < W.cols(); ++i)
      denom2 += ((state.f(i) / state.c) * (feature_jacobian(W.col(i)).transpose() * Bv)).squaredNorm();
  } else {
    for (Eigen::Index i = 0; i < W.cols(); ++i)
      denom2 += ((state.f(i) / state.c) * (feature_jacobian(W.col(i)).transpose() * state.B)).squaredNorm();
    denom2 /= std::max(state.k_svd, 1);
  }
  const double denominator = std::sqrt(denom2);
  if (!(denominator > 0.0) || !(numerator > 0.0) || !std::isfinite(numerator / denominator))
    throw HeuristicUnavailable("lambda_heuristic: vanishing momentum or penalty sensitivity");
  return numerator / (2.0 * sigma_star * denominator);
}

void TransportConfig::validate() const {
  if (!(alpha >= 0.0)) throw InvalidArgument("transport: alpha must be >= 0");
  if (!(eta > 0.0)) throw InvalidArgument("transport: eta must be > 0");
  if (max_iters < 0) throw InvalidArgument("transport: max_iters must be >= 0");
  if (!(grad_tol > 0.0)) throw InvalidArgument("transport: grad_tol must be > 0");
  if (lambda0 && !(*lambda0 > 0.0)) throw InvalidArgument("transport: lambda0 must be > 0");
  if (lambda1 && !(*lambda1 > 0.0)) throw InvalidArgument("transport: lambda1 must be > 0");
  if (!(sigma_star > 0.0)) throw InvalidArgument("transport: sigma_star must be > 0");
  if (!(fallback_lambda > 0.0)) throw InvalidArgument("transport: fallback_lambda must be > 0");
  if (n_cheb < 2) throw InvalidArgument("transport: N_cheb must be >= 2");
  if (quadrature_order < 1) throw InvalidArgument("transport: quadrature order must be >= 1");
  if (!(rel_tol >= 0.0) || rel_window < 1) throw InvalidArgument("transport: rel_tol must be >= 0 and rel_window >= 1");
  if (refit_every < 0 || trace_every < 0) throw InvalidArgument("transport: refit_every and trace_every must be >= 0");
}

namespace {

struct Layout {
  int d, m, modes;
  int theta_size() const { return d * m * modes; }
  int cloud_size() const { return d * m; }
  int start_offset() const { return theta_size(); }
  int end_offset() const { return theta_size() + cloud_size(); }
  int total() const { return theta_size() + 2 * cloud_size(); }
};

Vec pack(const Layout& L, const ThetaField& field, const Cloud& W0, const Cloud& W1) {
  Vec x(L.total());
  for (int i = 0; i < L.modes; ++i) x.segment(i * L.cloud_size(), L.cloud_size()) = field.theta[i].reshaped();
  x.segment(L.start_offset(), L.cloud_size()) = W0.reshaped();
  x.segment(L.end_offset(), L.cloud_size()) = W1.reshaped();
  return x;
}

void unpack(const Layout& L, const Vec& x, ThetaField& field, Cloud& W0, Cloud& W1) {
  for (int i = 0; i < L.modes; ++i) field.theta[i] = x.segment(i * L.cloud_size(), L.cloud_size()).reshaped(L.d, L.m);
  W0 = x.segment(L.start_offset(), L.cloud_size()).reshaped(L.d, L.m);
  W1 = x.segment(L.end_offset(), L.cloud_size()).reshaped(L.d, L.m);
}

double choose_lambda(const std::optional<double>& fixed, const Cloud& W, const Cloud& momenta,
                     const PenaltyState& state, const TransportConfig& cfg) {
  if (fixed) return *fixed;
  try {
    return lambda_heuristic(W, momenta, state, cfg.sigma_star);
  } catch (const HeuristicUnavailable&) {
    return cfg.fallback_lambda;
  }
}

}  // namespace

TransportResult solve_transport(const Cloud& X0, const Cloud& X1, const Lagrangian& lagrangian,
                                const TransportConfig& cfg) {
  cfg.validate();
  if (X0.rows() != X1.rows() || X0.cols() != X1.cols())
    throw InvalidArgument("solve_transport: source and target clouds must have the same shape");
  if (X0.cols() < 2) throw InvalidArgument("solve_transport: need at least two samples per cloud");

  const Layout L{static_cast<int>(X0.rows()), static_cast<int>(X0.cols()), cfg.n_cheb - 1};
  const BasisCache cache = build_cache(cfg.n_cheb, gauss_legendre(cfg.quadrature_order, 0.0, 1.0));

  ThetaField field = make_theta_field(X0, cfg.n_cheb, cfg.kernel);
  Cloud W0 = X0, W1 = X1;
  PenaltyState state0 = fit_penalty(W0, X0, cfg.svd_tol);
  PenaltyState state1 = fit_penalty(W1, X1, cfg.svd_tol);

  // Boundary momenta of the initial straight chords.
  Cloud mom0(L.d, L.m), mom1(L.d, L.m);
  for (int j = 0; j < L.m; ++j) {
    const EndpointMomentum em = endpoint_momentum(anchor_path(field, W0, W1, j), lagrangian);
    mom0.col(j) = em.start;
    mom1.col(j) = em.end;
  }
  const double lambda0 = choose_lambda(cfg.lambda0, W0, mom0, state0, cfg);
  const double lambda1 = choose_lambda(cfg.lambda1, W1, mom1, state1, cfg);

  ThetaField work = field;
  Cloud V0 = W0, V1 = W1;
  const ObjectiveFn objective = [&](const Vec& x, Vec* grad) -> double {
    unpack(L, x, work, V0, V1);
    TransportObjective obj;
    try {
      obj = transport_objective(work, V0, V1, lagrangian, cache, state0, state1, lambda0, lambda1);
    } catch (const NumericalRangeError&) {
      return std::numeric_limits<double>::infinity();
    }
    if (grad) {
      grad->resize(L.total());
      for (int i = 0; i < L.modes; ++i) grad->segment(i * L.cloud_size(), L.cloud_size()) = obj.d_theta[i].reshaped();
      grad->segment(L.start_offset(), L.cloud_size()) = obj.d_start.reshaped();
      grad->segment(L.end_offset(), L.cloud_size()) = obj.d_end.reshaped();
    }
    return obj.value;
  };

  TransportResult res;
  res.lambda0 = lambda0;
  res.lambda1 = lambda1;
  int done = 0;
  const IterationCallback tracer = [&](int iter, const Vec& x, double) {
    if (cfg.trace_every <= 0 || (done + iter) % cfg.trace_every != 0) return;
    unpack(L, x, work, V0, V1);
    const TransportObjective obj = transport_objective(work, V0, V1, lagrangian, cache, state0, state1, lambda0, lambda1);
    res.trace.push_back({done + iter, obj.action, obj.penalty0, obj.penalty1, obj.value});
  };

  DescentOptions opt;
  opt.eta = cfg.eta;
  opt.grad_tol = cfg.grad_tol;
  opt.backtracking = cfg.backtracking;
  opt.rel_tol = cfg.rel_tol;
  opt.rel_window = cfg.rel_window;
  const std::vector<Block> blocks{{0, L.theta_size()}, {L.start_offset(), 2 * L.cloud_size()}};

  Vec x = pack(L, field, W0, W1);
  if (cfg.trace_every > 0) {
    const TransportObjective obj = transport_objective(field, W0, W1, lagrangian, cache, state0, state1, lambda0, lambda1);
    res.trace.push_back({0, obj.action, obj.penalty0, obj.penalty1, obj.value});
  }
  DescentResult dr;
  while (true) {
    const int chunk = cfg.refit_every > 0 ? std::min(cfg.refit_every, cfg.max_iters - done) : cfg.max_iters - done;
    opt.max_iters = chunk;
    dr = block_descent(objective, x, blocks, opt, tracer);
    x = dr.x;
    done += dr.iterations;
    if (dr.converged || dr.stalled || done >= cfg.max_iters || cfg.refit_every <= 0) break;
    unpack(L, x, work, V0, V1);
    state0 = refit(state0, V0, cfg.svd_tol);
    state1 = refit(state1, V1, cfg.svd_tol);
  }

  unpack(L, x, field, W0, W1);
  const TransportObjective fin = transport_objective(field, W0, W1, lagrangian, cache, state0, state1, lambda0, lambda1);
  res.theta = field;
  res.W0 = W0;
  res.W1 = W1;
  res.total_cost = fin.action;
  res.objective = fin.value;
  res.penalty0 = fin.penalty0;
  res.penalty1 = fin.penalty1;
  res.iterations = done;
  res.converged = dr.converged;
  res.stagnated = dr.stagnated;
  res.final_grad_norm = dr.grad_norm;
  const auto coeffs = anchor_coefficients(field);
  for (int j = 0; j < L.m; ++j) {
    res.paths.push_back(path_from(coeffs, W0, W1, j));
    res.pairing.push_back({j, W0.col(j), W1.col(j)});
  }
  return res;
}

TransportResult solve_transport(const Cloud& X0, const Cloud& X1, const DensityModel& model,
                                const TransportConfig& cfg) {
  return solve_transport(X0, X1, DensityLagrangian(model, cfg.alpha), cfg);
}

SnapResult snap_to_targets(const Cloud& endpoints, const Cloud& targets) {
  if (endpoints.rows() != targets.rows() || targets.cols() < 1)
    throw InvalidArgument("snap_to_targets: dimension mismatch or empty targets");
  SnapResult out;
  std::vector<bool> used(targets.cols(), false);
  for (Eigen::Index i = 0; i < endpoints.cols(); ++i) {
    Eigen::Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < targets.cols(); ++j) {
      const double dist = (endpoints.col(i) - targets.col(j)).squaredNorm();
      if (dist < best_d) {
        best_d = dist;
        best = j;
      }
    }
    if (used[best]) ++out.collisions;
    used[best] = true;
    out.target.push_back(static_cast<int>(best));
  }
  return out;
}

}  // namespace minact
