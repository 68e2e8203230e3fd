#include "minact/metric.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "minact/errors.hpp"

namespace minact {

namespace {

void check_spd(const Mat& G) {
  if (G.rows() != G.cols() || !G.allFinite()) throw InvalidMetric("metric is not a finite square matrix");
  const double scale = G.cwiseAbs().maxCoeff();
  if (!((G - G.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + scale)))
    throw InvalidMetric("metric is not symmetric");
  Eigen::LLT<Mat> llt(G);
  if (llt.info() != Eigen::Success) throw InvalidMetric("metric is not positive definite");
}

}  // namespace

ConstantMetric::ConstantMetric(Mat G0) : G0_(std::move(G0)) { check_spd(G0_); }

MetricValue ConstantMetric::evaluate(const Vec&) const {
  return {G0_, std::vector<Mat>(G0_.rows(), Mat::Zero(G0_.rows(), G0_.cols()))};
}

IsotropicDensityMetric::IsotropicDensityMetric(DensityPtr model, double alpha, int dim)
    : model_(std::move(model)), alpha_(alpha), dim_(dim) {
  if (!model_) throw InvalidArgument("IsotropicDensityMetric: null density");
  if (!(alpha >= 0.0)) throw InvalidArgument("IsotropicDensityMetric: alpha must be >= 0");
  if (dim < 1) throw InvalidArgument("IsotropicDensityMetric: dim must be >= 1");
}

MetricValue IsotropicDensityMetric::evaluate(const Vec& w) const {
  const DensityValue rho = model_->evaluate(w);
  const double g = 0.5 * std::exp(-alpha_ * rho.log_rho);
  MetricValue out;
  out.G = g * Mat::Identity(dim_, dim_);
  for (int l = 0; l < dim_; ++l) out.dG.push_back((-alpha_ * g * rho.grad_log(l)) * Mat::Identity(dim_, dim_));
  return out;
}

DiagonalField::DiagonalField(int dim, Entries entries, Jacobian jacobian)
    : dim_(dim), entries_(std::move(entries)), jacobian_(std::move(jacobian)) {
  if (dim < 1 || !entries_ || !jacobian_) throw InvalidArgument("DiagonalField: need dim >= 1 and both callbacks");
}

MetricValue DiagonalField::evaluate(const Vec& w) const {
  const Vec g = entries_(w);
  const Mat J = jacobian_(w);
  if (g.size() != dim_ || J.rows() != dim_ || J.cols() != dim_)
    throw InvalidMetric("DiagonalField: callback returned the wrong size");
  MetricValue out;
  out.G = g.asDiagonal();
  for (int l = 0; l < dim_; ++l) out.dG.push_back(J.col(l).asDiagonal());
  return out;
}

std::shared_ptr<DiagonalField> quadratic_diagonal(int dim, double base, double quad) {
  return std::make_shared<DiagonalField>(
      dim, [=](const Vec& w) -> Vec { return (base + quad * w.array().square()).matrix(); },
      [=](const Vec& w) -> Mat { return Mat((2.0 * quad * w).asDiagonal()); });
}

LagrangianTerms metric_lagrangian(const MetricField& field, const Vec& w, const Vec& w_dot) {
  if (w.size() != field.dim() || w_dot.size() != field.dim())
    throw InvalidArgument("metric_lagrangian: dimension mismatch");
  const MetricValue mv = field.evaluate(w);
  LagrangianTerms out;
  if (!mv.G.allFinite()) {
    // Out of range (e.g. rho^-alpha overflow): report non-finite terms, solvers turn this into a range error.
    const double inf = std::numeric_limits<double>::infinity();
    out.value = inf;
    out.d_velocity = Vec::Constant(w.size(), inf);
    out.d_position = Vec::Constant(w.size(), inf);
    return out;
  }
  check_spd(mv.G);
  const Vec Gv = mv.G * w_dot;
  out.value = w_dot.dot(Gv);
  out.d_velocity = 2.0 * Gv;
  out.d_position.resize(w.size());
  for (Eigen::Index l = 0; l < w.size(); ++l) out.d_position(l) = w_dot.dot(mv.dG[l] * w_dot);
  return out;
}

Vec metric_momentum(const MetricField& field, const ChebyshevPath& path, double t) {
  const PathState st = path_state(path, t);
  return 2.0 * (field.evaluate(st.w).G * st.w_dot);
}

}  // namespace minact
