#pragma once

#include <vector>

#include "minact/chebyshev.hpp"

namespace minact {

/// Point clouds are stored column-wise: a d x m matrix holds m points.
using Cloud = Mat;

/// Number of features for dimension d: all coordinates plus the upper-triangular
/// quadratic monomials, d + d(d+1)/2. Five for d = 2.
int feature_count(int d);

/// Row i holds g(y_i) = (y_1, .., y_d, y_1 y_1, y_1 y_2, .., y_d y_d) of column i of Y.
/// For d = 2 this is (y1, y2, y1^2, y1 y2, y2^2).
Mat quadratic_features(const Cloud& Y);

/// Jacobian of g at y: feature_count(d) x d.
Mat feature_jacobian(const Vec& y);

/// Frozen statistics of the distribution-matching penalty.
///
/// The penalty of a candidate cloud W against the reference targets X is
/// |f^T Q|^2 with Q = ((G - 1 mu^T) / c) B, where G stacks the features of W
/// (first) and X, f = +1/m on W rows and -1/m on X rows, and mu, c, B were
/// computed once by fit_penalty.
struct PenaltyState {
  Vec mu;                 // column means of the fitted feature matrix
  double c = 1.0;         // Frobenius norm of the centered features
  Mat B;                  // V_k S_k^-1, features x k_svd
  Vec f;                  // +-1/m weights, length 2m
  int k_svd = 0;
  Cloud reference_targets;

  int cloud_size() const { return static_cast<int>(reference_targets.cols()); }
};

inline constexpr double kDefaultSvdTolerance = 1e-8;

/// Fits mu, c and B on Y = W u X. Singular values below svd_tol * s_1 are dropped.
/// Throws InvalidArgument on size mismatch and DegenerateCloud if all rows coincide.
PenaltyState fit_penalty(const Cloud& W, const Cloud& X, double svd_tol = kDefaultSvdTolerance);

/// f^T Q for the current cloud (length k_svd).
Vec penalty_projection(const PenaltyState& state, const Cloud& W);

double penalty_value(const PenaltyState& state, const Cloud& W);

/// d x m matrix; column i is the derivative of the penalty with respect to w_i.
Mat penalty_grad(const PenaltyState& state, const Cloud& W);

/// Exact alternative to the fixed-statistics convention: refits mu, c and B on
/// the current cloud. Gradients taken after a refit ignore the derivative of the
/// statistics themselves.
PenaltyState refit(const PenaltyState& state, const Cloud& W, double svd_tol = kDefaultSvdTolerance);

}  // namespace minact
