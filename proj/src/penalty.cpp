#include "minact/penalty.hpp"

#include <string>

#include "minact/errors.hpp"

namespace minact {

int feature_count(int d) { return d + d * (d + 1) / 2; }

namespace {

void check_dim(Eigen::Index d) {
  if (d < 1) throw UnsupportedDimension("quadratic features need dimension >= 1");
}

void features_into(const Vec& y, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) {
  const auto d = y.size();
  row.head(d) = y.transpose();
  Eigen::Index col = d;
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a; b < d; ++b) row(col++) = y(a) * y(b);
}

void check_sizes(const PenaltyState& state, const Cloud& W) {
  if (W.cols() != state.reference_targets.cols() || W.rows() != state.reference_targets.rows())
    throw InvalidArgument("penalty: cloud has shape " + std::to_string(W.rows()) + "x" + std::to_string(W.cols()) +
                          ", fitted for " + std::to_string(state.reference_targets.rows()) + "x" +
                          std::to_string(state.reference_targets.cols()));
}

Mat stacked_features(const Cloud& W, const Cloud& X) {
  Cloud Y(W.rows(), W.cols() + X.cols());
  Y << W, X;
  return quadratic_features(Y);
}

}  // namespace

Mat quadratic_features(const Cloud& Y) {
  check_dim(Y.rows());
  Mat G(Y.cols(), feature_count(static_cast<int>(Y.rows())));
  for (Eigen::Index i = 0; i < Y.cols(); ++i) features_into(Y.col(i), G.row(i));
  return G;
}

Mat feature_jacobian(const Vec& y) {
  check_dim(y.size());
  const auto d = y.size();
  Mat J = Mat::Zero(feature_count(static_cast<int>(d)), d);
  J.topRows(d).setIdentity();
  Eigen::Index row = d;
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a; b < d; ++b, ++row) {
      J(row, a) += y(b);
      J(row, b) += y(a);
    }
  return J;
}

PenaltyState fit_penalty(const Cloud& W, const Cloud& X, double svd_tol) {
  if (W.cols() != X.cols() || W.rows() != X.rows())
    throw InvalidArgument("fit_penalty: endpoint and target clouds must have equal sizes and dimension");
  if (W.cols() < 1) throw InvalidArgument("fit_penalty: empty clouds");
  if (!(svd_tol >= 0.0)) throw InvalidArgument("fit_penalty: svd_tol must be >= 0");
  const auto m = W.cols();

  const Mat G = stacked_features(W, X);
  PenaltyState st;
  st.mu = G.colwise().mean().transpose();
  const Mat Gc = G.rowwise() - st.mu.transpose();
  st.c = Gc.norm();
  if (!(st.c > 0.0)) throw DegenerateCloud("fit_penalty: all points coincide, centered features vanish");

  Eigen::JacobiSVD<Mat> svd(Gc / st.c, Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  int k = 0;
  while (k < s.size() && s(k) > svd_tol * s(0)) ++k;
  st.k_svd = k;
  st.B = svd.matrixV().leftCols(k) * s.head(k).cwiseInverse().asDiagonal();

  st.f.resize(2 * m);
  st.f.head(m).setConstant(1.0 / static_cast<double>(m));
  st.f.tail(m).setConstant(-1.0 / static_cast<double>(m));
  st.reference_targets = X;
  return st;
}

Vec penalty_projection(const PenaltyState& state, const Cloud& W) {
  check_sizes(state, W);
  const Mat G = stacked_features(W, state.reference_targets);
  // f sums to zero, so f^T (G - 1 mu^T) = f^T G; keep the centering explicit anyway.
  const Mat Q = ((G.rowwise() - state.mu.transpose()) / state.c) * state.B;
  return Q.transpose() * state.f;
}

double penalty_value(const PenaltyState& state, const Cloud& W) {
  return penalty_projection(state, W).squaredNorm();
}

Mat penalty_grad(const PenaltyState& state, const Cloud& W) {
  const Vec v = penalty_projection(state, W);
  // Only row i of G depends on w_i: d/dw_i |f^T Q|^2 = (2 f_i / c) J(w_i)^T B v.
  const Vec Bv = state.B * v;
  Mat grad(W.rows(), W.cols());
  for (Eigen::Index i = 0; i < W.cols(); ++i)
    grad.col(i) = (2.0 * state.f(i) / state.c) * (feature_jacobian(W.col(i)).transpose() * Bv);
  return grad;
}

PenaltyState refit(const PenaltyState& state, const Cloud& W, double svd_tol) {
  return fit_penalty(W, state.reference_targets, svd_tol);
}

}  // namespace minact
