#pragma once

#include "minact/chebyshev.hpp"
#include "minact/density.hpp"

namespace minact {

/// L(w_dot, w) with its partial derivatives at one point.
struct LagrangianTerms {
  double value = 0.0;
  Vec d_velocity;  // dL / d w_dot
  Vec d_position;  // dL / d w
};

/// Time-independent Lagrangian, quadratic in velocity. Solvers only see this interface.
class Lagrangian {
 public:
  virtual ~Lagrangian() = default;
  virtual LagrangianTerms evaluate(const Vec& w, const Vec& w_dot) const = 0;
};

/// L = 1/2 |w_dot|^2 rho(w)^-alpha. Holds a non-owning reference to the model.
class DensityLagrangian final : public Lagrangian {
 public:
  DensityLagrangian(const DensityModel& model, double alpha);
  LagrangianTerms evaluate(const Vec& w, const Vec& w_dot) const override;

  const DensityModel& model() const { return *model_; }
  double alpha() const { return alpha_; }

 private:
  const DensityModel* model_;
  double alpha_;
};

}  // namespace minact
