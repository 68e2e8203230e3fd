#include "minact/el_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minact/errors.hpp"
#include "minact/quadrature.hpp"

namespace minact {

Vec el_rhs(const Vec& w, const Vec& w_dot) {
  return -w.dot(w_dot) * w_dot + 0.5 * w_dot.squaredNorm() * w;
}

namespace {

// Dormand-Prince 5(4) tableau, error weights and dense-output coefficients.
constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
constexpr double a21 = 0.2;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI controller constants (Hairer & Wanner defaults).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kFacMin = 0.2;   // hnew >= h * 0.2
constexpr double kFacMax = 10.0;  // hnew <= h * 10

// First-order state y = (w, w_dot).
Vec flow(const Vec& y) {
  const auto d = y.size() / 2;
  Vec out(y.size());
  const Vec w = y.head(d), v = y.tail(d);
  out.head(d) = v;
  out.tail(d) = el_rhs(w, v);
  return out;
}

TrajectorySample make_sample(double t, const Vec& y) {
  const auto d = y.size() / 2;
  return {t, y.head(d), y.tail(d)};
}

}  // namespace

Trajectory integrate_ivp(const Vec& x0, const Vec& v, const std::vector<double>& output_times,
                         const IvpOptions& opt) {
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) throw InvalidArgument("integrate_ivp: tolerances must be positive");
  if (x0.size() != v.size()) throw InvalidArgument("integrate_ivp: dimension mismatch");
  std::vector<double> outs = output_times;
  for (double t : outs)
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("integrate_ivp: output times must lie in [0, 1]");
  std::sort(outs.begin(), outs.end());

  const auto n = 2 * x0.size();
  Vec y(n);
  y << x0, v;

  Trajectory traj;
  std::size_t next_out = 0;
  while (next_out < outs.size() && outs[next_out] <= 0.0) traj.samples.push_back(make_sample(outs[next_out++], y));

  const double t_end = 1.0;
  double t = 0.0;
  Vec k1 = flow(y), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n), err(n), tmp(n);

  // Initial step from the size of the state and its derivative.
  double h;
  {
    const Vec scale = (opt.atol + opt.rtol * y.array().abs()).matrix();
    const double dnf = (k1.array() / scale.array()).square().mean();
    const double dny = (y.array() / scale.array()).square().mean();
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, t_end);
  }

  double facold = 1e-4;
  bool reject = false;
  while (t < t_end) {
    if (traj.steps + traj.rejected >= opt.max_steps)
      throw IntegrationFailure("integrate_ivp: step budget exhausted at t = " + std::to_string(t));
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw IntegrationFailure("integrate_ivp: step size underflow at t = " + std::to_string(t));
    if (t + h > t_end) h = t_end - t;

    k2 = flow(y + h * a21 * k1);
    k3 = flow(y + h * (a31 * k1 + a32 * k2));
    k4 = flow(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = flow(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = flow(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    k7 = flow(ynew);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const Vec scale = (opt.atol + opt.rtol * y.array().abs().max(ynew.array().abs())).matrix();
    const double en = std::sqrt((err.array() / scale.array()).square().mean());
    if (!std::isfinite(en)) {
      h *= 0.1;
      ++traj.rejected;
      reject = true;
      continue;
    }

    const double fac11 = std::pow(en, kExpo);
    double fac = fac11 / std::pow(facold, kBeta);
    fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
    double hnew = h / fac;

    if (en <= 1.0) {
      facold = std::max(en, 1e-4);
      // Continuous extension on [t, t + h].
      const double t_next = (t + h >= t_end) ? t_end : t + h;
      if (next_out < outs.size() && outs[next_out] <= t_next) {
        const Vec ydiff = ynew - y;
        const Vec bspl = h * k1 - ydiff;
        const Vec r4 = ydiff - h * k7 - bspl;
        const Vec r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (next_out < outs.size() && outs[next_out] <= t_next) {
          const double theta = (outs[next_out] - t) / h;
          const double theta1 = 1.0 - theta;
          tmp = y + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
          traj.samples.push_back(make_sample(outs[next_out++], tmp));
        }
      }
      y = ynew;
      k1 = k7;
      t = t_next;
      ++traj.steps;
      if (reject) hnew = std::min(hnew, h);
      reject = false;
    } else {
      hnew = h / std::min(1.0 / kFacMin, fac11 / kSafety);
      ++traj.rejected;
      reject = true;
    }
    h = hnew;
  }

  const auto d = x0.size();
  traj.w_end = y.head(d);
  traj.w_dot_end = y.tail(d);
  return traj;
}

namespace {

double mismatch(const Vec& x0, const Vec& x1, const Vec& v, const IvpOptions& ivp) {
  try {
    const Trajectory tr = integrate_ivp(x0, v, {}, ivp);
    const double j = 0.5 * (tr.w_end - x1).squaredNorm();
    return std::isfinite(j) ? j : std::numeric_limits<double>::infinity();
  } catch (const IntegrationFailure&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

ShootingResult shoot_bvp(const Vec& x0, const Vec& x1, const ShootingOptions& opt) {
  if (!(opt.eps > 0.0)) throw InvalidArgument("shoot_bvp: eps must be positive");
  if (x0.size() != x1.size()) throw InvalidArgument("shoot_bvp: dimension mismatch");
  const auto d = x0.size();

  std::vector<double> times(std::max(opt.n_samples, 2));
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i) / (times.size() - 1);

  ShootingResult res;
  Vec v = x1 - x0;
  double best = mismatch(x0, x1, v, opt.ivp);
  int evals = 1;

  // Coordinate pattern search: probe +-step along each axis, keep the first
  // improvement and widen the step; halve it after a full sweep without one.
  double step = std::max(0.1 * v.norm(), 1e-3);
  while (best > opt.eps) {
    if (evals >= opt.max_evaluations)
      throw NoConvergence("shoot_bvp: evaluation budget exhausted, best J = " + std::to_string(best), best);
    bool improved = false;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d) && !improved; ++i) {
      for (double sign : {1.0, -1.0}) {
        Vec probe = v;
        probe(i) += sign * step;
        const double j = mismatch(x0, x1, probe, opt.ivp);
        ++evals;
        if (j < best) {
          // Keep moving the same way while it pays off.
          best = j;
          v = probe;
          while (evals < opt.max_evaluations && best > opt.eps) {
            Vec further = v;
            further(i) += sign * step;
            const double jf = mismatch(x0, x1, further, opt.ivp);
            ++evals;
            if (!(jf < best)) break;
            best = jf;
            v = further;
          }
          improved = true;
          break;
        }
        if (evals >= opt.max_evaluations) break;
      }
    }
    step *= improved ? opt.expand : opt.shrink;
    if (step < 1e-15 * std::max(1.0, v.norm()))
      throw NoConvergence("shoot_bvp: pattern step underflow, best J = " + std::to_string(best), best);
  }

  res.v_star = v;
  res.trajectory = integrate_ivp(x0, v, times, opt.ivp);
  res.terminal_mismatch = 0.5 * (res.trajectory.w_end - x1).squaredNorm();
  res.ode_steps = res.trajectory.steps;
  res.evaluations = evals;
  return res;
}

double oracle_action(const Vec& x0, const Vec& v, int quadrature_order, const IvpOptions& options) {
  const QuadratureRule rule = gauss_legendre(quadrature_order, 0.0, 1.0);
  const Trajectory tr = integrate_ivp(x0, v, rule.nodes, options);
  double sum = 0.0;
  for (std::size_t r = 0; r < rule.nodes.size(); ++r) {
    const auto& s = tr.samples[r];
    sum += rule.weights[r] * 0.5 * s.w_dot.squaredNorm() * std::exp(0.5 * s.w.squaredNorm());
  }
  return sum;
}

}  // namespace minact
