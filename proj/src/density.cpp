#include "minact/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "minact/errors.hpp"

namespace minact {

namespace {

double floored_exp(double log_value) {
  return std::max(std::exp(log_value), std::numeric_limits<double>::min());
}

DensityValue from_log(double log_rho, Vec grad_log) {
  DensityValue out;
  out.log_rho = log_rho;
  out.rho = floored_exp(log_rho);
  out.grad = out.rho * grad_log;
  out.grad_log = std::move(grad_log);
  return out;
}

}  // namespace

DensityValue StandardGaussian::evaluate(const Vec& w) const {
  return from_log(-0.5 * w.squaredNorm(), -w);
}

ConstantDensity::ConstantDensity(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw InvalidArgument("ConstantDensity: value must be positive");
}

DensityValue ConstantDensity::evaluate(const Vec& w) const {
  DensityValue out;
  out.rho = value_;
  out.log_rho = std::log(value_);
  out.grad = Vec::Zero(w.size());
  out.grad_log = Vec::Zero(w.size());
  return out;
}

RingMixture::RingMixture(double sigma, double z_min, double z_max, int n_z, double c_rho)
    : sigma_(sigma), c_rho_(c_rho) {
  if (!(sigma > 0.0)) throw InvalidArgument("ring_mixture: sigma must be positive");
  if (n_z < 1) throw InvalidArgument("ring_mixture: N_Z must be >= 1");
  if (!(z_min < z_max)) throw InvalidArgument("ring_mixture: need z_min < z_max");
  if (!(c_rho > 0.0)) throw InvalidArgument("ring_mixture: C_rho must be positive");
  rule_ = gauss_legendre(n_z, z_min, z_max);
  centers_.resize(2, n_z);
  log_weights_.resize(n_z);
  for (int j = 0; j < n_z; ++j) {
    centers_(0, j) = std::cos(rule_.nodes[j]);
    centers_(1, j) = std::sin(rule_.nodes[j]);
    log_weights_[j] = std::log(rule_.weights[j]);
  }
}

DensityValue RingMixture::evaluate(const Vec& w) const {
  if (w.size() != 2) throw UnsupportedDimension("RingMixture is two-dimensional");
  const int n = static_cast<int>(log_weights_.size());
  const double inv_two_var = 0.5 / (sigma_ * sigma_);
  thread_local std::vector<double> expo;
  expo.resize(n);
  double peak = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    const double dx = w(0) - centers_(0, j);
    const double dy = w(1) - centers_(1, j);
    expo[j] = log_weights_[j] - (dx * dx + dy * dy) * inv_two_var;
    peak = std::max(peak, expo[j]);
  }
  // Log-sum-exp with the largest exponent factored out.
  double total = 0.0;
  double gx = 0.0, gy = 0.0;
  for (int j = 0; j < n; ++j) {
    const double e = std::exp(expo[j] - peak);
    total += e;
    gx += e * (centers_(0, j) - w(0));
    gy += e * (centers_(1, j) - w(1));
  }
  Vec grad_log(2);
  grad_log << gx / (total * sigma_ * sigma_), gy / (total * sigma_ * sigma_);
  return from_log(std::log(c_rho_) + peak + std::log(total), std::move(grad_log));
}

std::shared_ptr<RingMixture> ring_mixture(double sigma, double z_min, double z_max, int n_z, double c_rho) {
  return std::make_shared<RingMixture>(sigma, z_min, z_max, n_z, c_rho);
}

GaussianMixture::GaussianMixture(std::vector<Component> components) : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("GaussianMixture: need at least one component");
  const auto d = components_.front().mean.size();
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || !(c.sigma > 0.0)) throw InvalidArgument("GaussianMixture: weights and sigmas must be positive");
    if (c.mean.size() != d) throw InvalidArgument("GaussianMixture: component dimensions differ");
    log_norm_.push_back(std::log(c.weight) - static_cast<double>(d) * std::log(std::sqrt(2.0 * std::numbers::pi) * c.sigma));
  }
}

DensityValue GaussianMixture::evaluate(const Vec& w) const {
  const auto n = components_.size();
  std::vector<double> expo(n);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const auto& c = components_[j];
    if (c.mean.size() != w.size()) throw InvalidArgument("GaussianMixture: point dimension mismatch");
    expo[j] = log_norm_[j] - (w - c.mean).squaredNorm() / (2.0 * c.sigma * c.sigma);
    peak = std::max(peak, expo[j]);
  }
  double total = 0.0;
  Vec grad_log = Vec::Zero(w.size());
  for (std::size_t j = 0; j < n; ++j) {
    const auto& c = components_[j];
    const double e = std::exp(expo[j] - peak);
    total += e;
    grad_log += e * (c.mean - w) / (c.sigma * c.sigma);
  }
  grad_log /= total;
  return from_log(peak + std::log(total), std::move(grad_log));
}

ScaledDensity::ScaledDensity(DensityPtr base, double gamma)
    : base_(std::move(base)), gamma_(gamma), log_gamma_(std::log(gamma)) {
  if (!base_) throw InvalidArgument("ScaledDensity: null base model");
  if (!(gamma > 0.0)) throw InvalidArgument("ScaledDensity: gamma must be positive");
}

DensityValue ScaledDensity::evaluate(const Vec& w) const {
  DensityValue v = base_->evaluate(w);
  return from_log(v.log_rho + log_gamma_, std::move(v.grad_log));
}

std::vector<GridPoint> density_grid(const DensityModel& model, double x_min, double x_max, double y_min,
                                    double y_max, int nx, int ny) {
  if (nx < 2 || ny < 2) throw InvalidArgument("density_grid: need at least 2 samples per axis");
  std::vector<GridPoint> out;
  out.reserve(static_cast<std::size_t>(nx) * ny);
  Vec w(2);
  for (int iy = 0; iy < ny; ++iy) {
    const double y = y_min + (y_max - y_min) * iy / (ny - 1);
    for (int ix = 0; ix < nx; ++ix) {
      const double x = x_min + (x_max - x_min) * ix / (nx - 1);
      w << x, y;
      out.push_back({x, y, model.evaluate(w).rho});
    }
  }
  return out;
}

}  // namespace minact
