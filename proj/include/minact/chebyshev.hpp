#pragma once

#include <Eigen/Dense>

#include "minact/quadrature.hpp"

namespace minact {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// phi_k(t) = T_k(2t-1) - (-1)^k (1-t) - t. Vanishes at t = 0 and t = 1.
double basis_value(int k, double t);

/// phi_k'(t) = 2k U_{k-1}(2t-1) + (-1)^k - 1.
double basis_derivative(int k, double t);

/// A path w(t) = (1-t) w0 + t w1 + sum_{k=2}^{N} a_k phi_k(t) on [0, 1].
///
/// `coeffs` is d x (N-1); column k-2 holds the d-vector a_k.
struct ChebyshevPath {
  Vec w0;
  Vec w1;
  Mat coeffs;

  ChebyshevPath() = default;
  ChebyshevPath(Vec start, Vec end, int n_cheb);
  ChebyshevPath(Vec start, Vec end, Mat mode_coeffs);

  int dim() const { return static_cast<int>(w0.size()); }
  int n_cheb() const { return static_cast<int>(coeffs.cols()) + 1; }
  int n_modes() const { return static_cast<int>(coeffs.cols()); }
};

struct PathState {
  Vec w;
  Vec w_dot;
};

/// Position and velocity at t in [0, 1].
PathState path_state(const ChebyshevPath& path, double t);

/// Basis values and derivatives at the nodes of `rule`, plus the closed-form
/// endpoint derivatives. Rows index modes k = 2..N, columns index nodes.
struct BasisCache {
  QuadratureRule rule;
  Mat phi;
  Mat dphi;
  Vec dphi_start;  // phi_k'(0)
  Vec dphi_end;    // phi_k'(1)

  int n_cheb() const { return static_cast<int>(phi.rows()) + 1; }
  int n_nodes() const { return static_cast<int>(phi.cols()); }
};

BasisCache build_cache(int n_cheb, QuadratureRule rule);

/// Path positions and velocities at every cached node (d x M each).
void path_nodes(const ChebyshevPath& path, const BasisCache& cache, Mat& positions, Mat& velocities);

/// Velocity at t = 0 and t = 1 from the closed-form phi_k'(0), phi_k'(1).
Vec start_velocity(const ChebyshevPath& path);
Vec end_velocity(const ChebyshevPath& path);

}  // namespace minact
