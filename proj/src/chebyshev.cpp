#include "minact/chebyshev.hpp"

#include <string>

#include "minact/errors.hpp"

namespace minact {

namespace {

double chebyshev_t(int k, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int n = 1; n < k; ++n) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double chebyshev_u(int k, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0, cur = 2.0 * x;
  for (int n = 1; n < k; ++n) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

void check_mode(int k, const char* who) {
  if (k < 2) throw InvalidArgument(std::string(who) + ": mode index must be >= 2, got " + std::to_string(k));
}

}  // namespace

double basis_value(int k, double t) {
  check_mode(k, "basis_value");
  return chebyshev_t(k, 2.0 * t - 1.0) - parity(k) * (1.0 - t) - t;
}

double basis_derivative(int k, double t) {
  check_mode(k, "basis_derivative");
  return 2.0 * k * chebyshev_u(k - 1, 2.0 * t - 1.0) + parity(k) - 1.0;
}

ChebyshevPath::ChebyshevPath(Vec start, Vec end, int n_cheb)
    : w0(std::move(start)), w1(std::move(end)) {
  if (n_cheb < 2) throw InvalidArgument("ChebyshevPath: N_cheb must be >= 2");
  if (w0.size() != w1.size()) throw InvalidArgument("ChebyshevPath: endpoint dimensions differ");
  coeffs = Mat::Zero(w0.size(), n_cheb - 1);
}

ChebyshevPath::ChebyshevPath(Vec start, Vec end, Mat mode_coeffs)
    : w0(std::move(start)), w1(std::move(end)), coeffs(std::move(mode_coeffs)) {
  if (w0.size() != w1.size() || coeffs.rows() != w0.size())
    throw InvalidArgument("ChebyshevPath: inconsistent dimensions");
  if (coeffs.cols() < 1) throw InvalidArgument("ChebyshevPath: N_cheb must be >= 2");
}

PathState path_state(const ChebyshevPath& path, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("path_state: t must lie in [0, 1]");
  PathState s;
  s.w = (1.0 - t) * path.w0 + t * path.w1;
  s.w_dot = path.w1 - path.w0;
  for (int i = 0; i < path.n_modes(); ++i) {
    const int k = i + 2;
    s.w += basis_value(k, t) * path.coeffs.col(i);
    s.w_dot += basis_derivative(k, t) * path.coeffs.col(i);
  }
  return s;
}

BasisCache build_cache(int n_cheb, QuadratureRule rule) {
  if (n_cheb < 2) throw InvalidArgument("build_cache: N_cheb must be >= 2");
  BasisCache cache;
  const int modes = n_cheb - 1;
  const int M = rule.order();
  cache.phi.resize(modes, M);
  cache.dphi.resize(modes, M);
  cache.dphi_start.resize(modes);
  cache.dphi_end.resize(modes);
  for (int i = 0; i < modes; ++i) {
    const int k = i + 2;
    for (int r = 0; r < M; ++r) {
      cache.phi(i, r) = basis_value(k, rule.nodes[r]);
      cache.dphi(i, r) = basis_derivative(k, rule.nodes[r]);
    }
    cache.dphi_end(i) = 2.0 * k * k + parity(k) - 1.0;
    cache.dphi_start(i) = 2.0 * k * k * parity(k - 1) + parity(k) - 1.0;
  }
  cache.rule = std::move(rule);
  return cache;
}

void path_nodes(const ChebyshevPath& path, const BasisCache& cache, Mat& positions, Mat& velocities) {
  if (path.n_cheb() != cache.n_cheb())
    throw InvalidArgument("path_nodes: cache built for a different N_cheb");
  const int M = cache.n_nodes();
  const Vec chord = path.w1 - path.w0;
  positions = path.coeffs * cache.phi;
  velocities = path.coeffs * cache.dphi;
  for (int r = 0; r < M; ++r) {
    const double t = cache.rule.nodes[r];
    positions.col(r) += (1.0 - t) * path.w0 + t * path.w1;
    velocities.col(r) += chord;
  }
}

namespace {

Vec endpoint_velocity(const ChebyshevPath& path, bool at_end) {
  Vec v = path.w1 - path.w0;
  for (int i = 0; i < path.n_modes(); ++i) {
    const int k = i + 2;
    const double d = at_end ? 2.0 * k * k + parity(k) - 1.0
                            : 2.0 * k * k * parity(k - 1) + parity(k) - 1.0;
    v += d * path.coeffs.col(i);
  }
  return v;
}

}  // namespace

Vec start_velocity(const ChebyshevPath& path) { return endpoint_velocity(path, false); }
Vec end_velocity(const ChebyshevPath& path) { return endpoint_velocity(path, true); }

}  // namespace minact
