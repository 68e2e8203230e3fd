#pragma once

#include <optional>
#include <vector>

#include "minact/chebyshev.hpp"
#include "minact/density.hpp"
#include "minact/descent.hpp"
#include "minact/lagrangian.hpp"
#include "minact/penalty.hpp"

namespace minact {

/// Radial-basis kernel K(s, s') = exp(-|s - s'|^2 / (2 h^2)).
/// A non-positive bandwidth selects the median pairwise anchor distance.
struct KernelSpec {
  double bandwidth = 0.0;

  bool uses_median() const { return !(bandwidth > 0.0); }
};

double rbf_kernel(const Vec& s, const Vec& t, double bandwidth);
double median_bandwidth(const Cloud& anchors);
Mat gram_matrix(const Cloud& anchors, double bandwidth);

/// Interior Chebyshev coefficients as kernel expansions over anchors:
/// a_k(s) = sum_j theta_{k,j} K(s, s_j).
struct ThetaField {
  std::vector<Mat> theta;  // per mode k = 2..N, d x m
  Cloud anchors;           // d x m
  Mat gram;                // m x m
  double bandwidth = 1.0;

  int n_cheb() const { return static_cast<int>(theta.size()) + 1; }
  int n_anchors() const { return static_cast<int>(anchors.cols()); }
  int dim() const { return static_cast<int>(anchors.rows()); }
};

/// Zero field on the given anchors.
ThetaField make_theta_field(const Cloud& anchors, int n_cheb, const KernelSpec& kernel);

/// a_k(s) for all modes, as a d x (N-1) matrix laid out like ChebyshevPath::coeffs.
Mat eval_coeff_field(const ThetaField& field, const Vec& s);

/// Coefficients at every anchor: entry k-2 is the d x m matrix [a_k(s_1) .. a_k(s_m)].
std::vector<Mat> anchor_coefficients(const ThetaField& field);

/// Path attached to anchor j.
ChebyshevPath anchor_path(const ThetaField& field, const Cloud& W0, const Cloud& W1, int j);

struct FamilyGradient {
  double action = 0.0;
  std::vector<Mat> d_anchor_coeffs;  // dS/da_k(s_j), per mode d x m
  std::vector<Mat> d_theta;          // dS/dtheta_{k,j}, per mode d x m
  Cloud d_start;                     // dS/dW0 (exact, coefficients fixed)
  Cloud d_end;                       // dS/dW1
};

/// Sum of the per-anchor discrete actions and its gradients. Paths are summed in
/// anchor order.
FamilyGradient family_action_and_grads(const ThetaField& field, const Cloud& W0, const Cloud& W1,
                                       const Lagrangian& lagrangian, const BasisCache& cache);
FamilyGradient family_action_and_grads(const ThetaField& field, const Cloud& W0, const Cloud& W1,
                                       const DensityModel& model, double alpha, const BasisCache& cache);

struct TransportObjective {
  double value = 0.0;  // J
  double action = 0.0;
  double penalty0 = 0.0;
  double penalty1 = 0.0;
  std::vector<Mat> d_theta;
  Cloud d_start;
  Cloud d_end;
};

/// J = S_dist + lambda0 R(W0; X0) + lambda1 R(W1; X1) and its gradients.
TransportObjective transport_objective(const ThetaField& field, const Cloud& W0, const Cloud& W1,
                                       const Lagrangian& lagrangian, const BasisCache& cache,
                                       const PenaltyState& state0, const PenaltyState& state1, double lambda0,
                                       double lambda1);

/// Penalty weight balancing the boundary-momentum magnitude against the
/// sensitivity of sigma = |f^T Q|:
///   lambda = 1/(2 sigma*) |momenta|_2 / |d sigma / dW|_2  (stacked over points).
/// At a matched cloud (sigma = 0) d sigma / dW is direction-dependent; its
/// root-mean-square over unit directions of f^T Q is used instead.
/// Throws HeuristicUnavailable when either stack vanishes.
double lambda_heuristic(const Cloud& W, const Cloud& momenta, const PenaltyState& state, double sigma_star);

struct TransportConfig {
  double alpha = 1.0;
  double eta = 1.0;
  int max_iters = 20000;
  double grad_tol = 1e-6;
  std::optional<double> lambda0;  // empty: choose with lambda_heuristic
  std::optional<double> lambda1;
  double sigma_star = 1e-3;
  double fallback_lambda = 1e3;   // used when the heuristic is unavailable
  int n_cheb = 10;
  int quadrature_order = kDefaultQuadratureOrder;
  KernelSpec kernel;
  double svd_tol = kDefaultSvdTolerance;
  int refit_every = 0;            // 0: statistics fixed at initialization
  int trace_every = 10;
  bool backtracking = true;
  double rel_tol = 0.0;           // stagnation stop, see DescentOptions
  int rel_window = 200;
  unsigned long long seed = 0;

  void validate() const;
};

struct TraceRow {
  int iteration;
  double action;
  double penalty0;
  double penalty1;
  double objective;
};

struct PairingEntry {
  int source;  // index into X0 (and anchor index)
  Vec start;   // w_j(0)
  Vec end;     // w_j(1)
};

struct TransportResult {
  std::vector<ChebyshevPath> paths;
  ThetaField theta;
  Cloud W0;
  Cloud W1;
  double total_cost = 0.0;  // action part only
  double objective = 0.0;
  double penalty0 = 0.0;
  double penalty1 = 0.0;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  int iterations = 0;
  bool converged = false;
  bool stagnated = false;  // converged through the relative-decrease test
  double final_grad_norm = 0.0;
  std::vector<PairingEntry> pairing;
  std::vector<TraceRow> trace;
};

/// Simultaneous optimization of the coefficient field and both endpoint clouds.
/// Anchors are the source samples, W0 = X0, W1 = X1 (index-matched) and
/// theta = 0 initially. Requires |X0| = |X1| >= 2.
TransportResult solve_transport(const Cloud& X0, const Cloud& X1, const Lagrangian& lagrangian,
                                const TransportConfig& cfg);
TransportResult solve_transport(const Cloud& X0, const Cloud& X1, const DensityModel& model,
                                const TransportConfig& cfg);

/// Nearest target sample for each transported endpoint (ties to the smallest index).
struct SnapResult {
  std::vector<int> target;
  int collisions = 0;  // endpoints sharing a target with an earlier endpoint
};

SnapResult snap_to_targets(const Cloud& endpoints, const Cloud& targets);

}  // namespace minact
