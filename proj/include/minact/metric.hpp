#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "minact/chebyshev.hpp"
#include "minact/density.hpp"
#include "minact/lagrangian.hpp"

namespace minact {

/// G(w) and its partial derivatives dG/dw_l.
struct MetricValue {
  Mat G;
  std::vector<Mat> dG;  // dG[l] = dG/dw_l
};

/// Symmetric positive-definite metric field.
class MetricField {
 public:
  virtual ~MetricField() = default;
  virtual MetricValue evaluate(const Vec& w) const = 0;
  virtual int dim() const = 0;
};

class ConstantMetric final : public MetricField {
 public:
  explicit ConstantMetric(Mat G0);
  MetricValue evaluate(const Vec& w) const override;
  int dim() const override { return static_cast<int>(G0_.rows()); }

 private:
  Mat G0_;
};

/// G = 1/2 rho(w)^-alpha I.
class IsotropicDensityMetric final : public MetricField {
 public:
  IsotropicDensityMetric(DensityPtr model, double alpha, int dim);
  MetricValue evaluate(const Vec& w) const override;
  int dim() const override { return dim_; }

 private:
  DensityPtr model_;
  double alpha_;
  int dim_;
};

/// G = diag(g_1(w), .., g_d(w)) with user-supplied entries and gradients.
class DiagonalField final : public MetricField {
 public:
  using Entries = std::function<Vec(const Vec&)>;    // (g_1 .. g_d)
  using Jacobian = std::function<Mat(const Vec&)>;   // J(i, l) = dg_i/dw_l
  DiagonalField(int dim, Entries entries, Jacobian jacobian);
  MetricValue evaluate(const Vec& w) const override;
  int dim() const override { return dim_; }

 private:
  int dim_;
  Entries entries_;
  Jacobian jacobian_;
};

/// g_i(w) = base + quad * w_i^2.
std::shared_ptr<DiagonalField> quadratic_diagonal(int dim, double base, double quad);

/// L = w_dot^T G w_dot, dL/dv = 2 G w_dot, (dL/dw)_l = w_dot^T dG/dw_l w_dot.
/// Throws InvalidMetric if G(w) is not symmetric positive definite.
LagrangianTerms metric_lagrangian(const MetricField& field, const Vec& w, const Vec& w_dot);

/// Adapter so that the solvers run on any metric field. Non-owning.
class MetricLagrangian final : public Lagrangian {
 public:
  explicit MetricLagrangian(const MetricField& field) : field_(&field) {}
  LagrangianTerms evaluate(const Vec& w, const Vec& w_dot) const override {
    return metric_lagrangian(*field_, w, w_dot);
  }

 private:
  const MetricField* field_;
};

/// m(t) = dL/dw_dot = 2 G(w(t)) w_dot(t).
Vec metric_momentum(const MetricField& field, const ChebyshevPath& path, double t);

}  // namespace minact
