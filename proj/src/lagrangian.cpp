#include "minact/lagrangian.hpp"

#include <cmath>

#include "minact/errors.hpp"

namespace minact {

DensityLagrangian::DensityLagrangian(const DensityModel& model, double alpha) : model_(&model), alpha_(alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("DensityLagrangian: alpha must be >= 0");
}

LagrangianTerms DensityLagrangian::evaluate(const Vec& w, const Vec& w_dot) const {
  LagrangianTerms out;
  if (alpha_ == 0.0) {
    out.value = 0.5 * w_dot.squaredNorm();
    out.d_velocity = w_dot;
    out.d_position = Vec::Zero(w.size());
    return out;
  }
  const DensityValue rho = model_->evaluate(w);
  // rho^-alpha from the log density; may overflow to inf, which callers report.
  const double weight = std::exp(-alpha_ * rho.log_rho);
  const double half_speed2 = 0.5 * w_dot.squaredNorm();
  out.value = half_speed2 * weight;
  out.d_velocity = weight * w_dot;
  out.d_position = (-alpha_ * half_speed2 * weight) * rho.grad_log;
  return out;
}

}  // namespace minact
