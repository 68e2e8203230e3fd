#pragma once

#include <memory>
#include <string>
#include <vector>

#include "minact/chebyshev.hpp"
#include "minact/quadrature.hpp"

namespace minact {

/// Density value with its gradient and log-gradient.
///
/// `log_rho` is the authoritative quantity: mixtures are accumulated in log space,
/// so it stays finite where `rho` itself would underflow. `rho` is floored at the
/// smallest normal double to keep it strictly positive.
struct DensityValue {
  double rho = 1.0;
  double log_rho = 0.0;
  Vec grad;
  Vec grad_log;
};

/// Background density. All models are unnormalized up to a constant factor,
/// which rescales every action uniformly and leaves minimizers unchanged.
class DensityModel {
 public:
  virtual ~DensityModel() = default;
  virtual DensityValue evaluate(const Vec& w) const = 0;
  virtual std::string kind() const = 0;
};

using DensityPtr = std::shared_ptr<const DensityModel>;

inline DensityValue density_eval(const DensityModel& model, const Vec& w) { return model.evaluate(w); }

/// rho(w) = exp(-|w|^2 / 2), no normalization constant.
class StandardGaussian final : public DensityModel {
 public:
  DensityValue evaluate(const Vec& w) const override;
  std::string kind() const override { return "gaussian"; }
};

class ConstantDensity final : public DensityModel {
 public:
  explicit ConstantDensity(double value);
  DensityValue evaluate(const Vec& w) const override;
  std::string kind() const override { return "constant"; }
  double value() const { return value_; }

 private:
  double value_;
};

/// rho(w) = C sum_j q_j exp(-|w - c(z_j)|^2 / (2 sigma^2)), c(z) = (cos z, sin z),
/// with (z_j, q_j) the Gauss-Legendre rule on [z_min, z_max]. Two-dimensional.
class RingMixture final : public DensityModel {
 public:
  RingMixture(double sigma, double z_min, double z_max, int n_z, double c_rho);
  DensityValue evaluate(const Vec& w) const override;
  std::string kind() const override { return "ring"; }

  double sigma() const { return sigma_; }
  const QuadratureRule& rule() const { return rule_; }
  const Mat& centers() const { return centers_; }

 private:
  double sigma_;
  double c_rho_;
  QuadratureRule rule_;
  Mat centers_;  // 2 x N_Z
  std::vector<double> log_weights_;
};

struct ring_defaults {
  static constexpr double sigma = 0.2;
  static constexpr int n_z = 64;
  static constexpr double c_rho = 1.0;
};

std::shared_ptr<RingMixture> ring_mixture(double sigma, double z_min, double z_max, int n_z, double c_rho);

/// Finite mixture of isotropic Gaussians. Each component contributes
/// weight * N(w; mean, sigma^2 I) with the normalized Gaussian pdf.
class GaussianMixture final : public DensityModel {
 public:
  struct Component {
    double weight;
    Vec mean;
    double sigma;
  };
  explicit GaussianMixture(std::vector<Component> components);
  DensityValue evaluate(const Vec& w) const override;
  std::string kind() const override { return "mixture"; }
  const std::vector<Component>& components() const { return components_; }

 private:
  std::vector<Component> components_;
  std::vector<double> log_norm_;
};

/// gamma * rho_base(w).
class ScaledDensity final : public DensityModel {
 public:
  ScaledDensity(DensityPtr base, double gamma);
  DensityValue evaluate(const Vec& w) const override;
  std::string kind() const override { return base_->kind(); }

 private:
  DensityPtr base_;
  double gamma_;
  double log_gamma_;
};

struct GridPoint {
  double x, y, rho;
};

/// Row-major samples of a 2-D density on an nx x ny lattice (x varies fastest).
std::vector<GridPoint> density_grid(const DensityModel& model, double x_min, double x_max, double y_min,
                                    double y_max, int nx, int ny);

}  // namespace minact
