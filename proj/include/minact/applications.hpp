#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "minact/density.hpp"
#include "minact/lagrangian.hpp"
#include "minact/penalty.hpp"
#include "minact/transport.hpp"

namespace minact {

// ---- seeded sampling ----

/// Independent stream seed derived from a root seed (splitmix64 of root and stream id).
std::uint64_t split_seed(std::uint64_t root, std::uint64_t stream);

/// m samples of N(center, sigma^2 I), drawn with Box-Muller from mt19937_64(seed).
Cloud sample_gaussian_cloud(const Vec& center, double sigma, int m, std::uint64_t seed);

/// Random permutation of 0..n-1 (Fisher-Yates on mt19937_64(seed)).
std::vector<int> random_permutation(int n, std::uint64_t seed);

/// k columns of X chosen without replacement.
Cloud subsample(const Cloud& X, int k, std::uint64_t seed);

// ---- clustering ----

struct DissimilarityEntry {
  int g = 0, h = 0;
  double objective = 0.0;
  double total_cost = 0.0;
  double penalty0 = 0.0;
  double penalty1 = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct DissimilarityMatrix {
  Mat D;
  Mat D_sym;
  std::vector<DissimilarityEntry> provenance;  // row-major over (g, h)
};

/// Converged transport objective between k-point subsamples of the two clouds.
/// Both subsamples use the same seed, so identical clouds give identical subsamples.
DissimilarityEntry transport_dissimilarity(const Cloud& cloud_g, const Cloud& cloud_h, const Lagrangian& lagrangian,
                                           const TransportConfig& cfg, int k);
double pairwise_dissimilarity(const Cloud& cloud_g, const Cloud& cloud_h, const DensityModel& model,
                              const TransportConfig& cfg, int k);

/// All ordered pairs, solved on up to n_threads workers. Results do not depend
/// on the number of workers.
DissimilarityMatrix dissimilarity_matrix(const std::vector<Cloud>& clouds, const Lagrangian& lagrangian,
                                         const TransportConfig& cfg, int k, int n_threads = 0);
DissimilarityMatrix dissimilarity_matrix(const std::vector<Cloud>& clouds, const DensityModel& model,
                                         const TransportConfig& cfg, int k, int n_threads = 0);

/// Mean of 1/2 |x - y|^2 over the optimal assignment between k-point subsamples.
double euclidean_dissimilarity(const Cloud& cloud_g, const Cloud& cloud_h, int k, std::uint64_t seed);
Mat euclidean_dissimilarity_matrix(const std::vector<Cloud>& clouds, int k, std::uint64_t seed);

struct Merge {
  int a, b;         // cluster ids (smallest member index) merged, a < b
  double distance;  // average linkage at merge time
  int size;         // size of the merged cluster
};

struct Clustering {
  std::vector<int> labels;  // 0-based, numbered by smallest member
  std::vector<Merge> merges;
};

/// Agglomerative clustering with average linkage until n_clusters remain.
/// Ties go to the pair with the smallest (a, b).
Clustering average_linkage_cluster(const Mat& D_sym, int n_clusters);

// ---- matching ----

/// Minimum total 1/2 |x0_i - x1_p[i]|^2 bijection (Hungarian method). p[i] is the target of source i.
std::vector<int> euclidean_assignment(const Cloud& X0, const Cloud& X1);

/// Exact assignment for a general square cost matrix.
std::vector<int> solve_assignment(const Mat& cost);

double assignment_cost(const Cloud& X0, const Cloud& X1, const std::vector<int>& pairs);

/// Rotation about the origin in the plane.
Mat rotation2d(double angle);

/// For each source, the index of the target nearest to R(delta_z) x0_i.
std::vector<int> rotation_truth(const Cloud& X0, const Cloud& X1, double delta_z);

/// Fraction of sources paired with their rotation ground-truth partner.
double rotation_truth_accuracy(const Cloud& X0, const Cloud& X1, double delta_z, const std::vector<int>& pairs);

// ---- scenes ----

struct ClusterSceneSpec {
  double ridge_x = 1.0;        // ridges at x = +-ridge_x
  double ridge_half_len = 2.4;
  int ridge_components = 7;
  double ridge_sigma = 0.45;
  double cloud_y = 1.8;        // clouds at (+-ridge_x, +-cloud_y)
  double cloud_sigma = 0.15;
  int cloud_size = 30;
  std::uint64_t seed = 0;
};

struct ClusterScene {
  DensityPtr density;
  std::vector<Cloud> clouds;   // order: (-x,+y), (-x,-y), (+x,+y), (+x,-y)
  std::vector<int> intended;   // labels 0 0 1 1
};

/// Two vertical high-density ridges separated by a valley. Clouds on the same
/// ridge are further apart in Euclidean distance than clouds facing each other
/// across the valley.
ClusterScene make_cluster_scene(const ClusterSceneSpec& spec);

struct MatchingSceneSpec {
  double z0 = 0.0;
  double delta_z = 2.0 * 3.14159265358979323846 / 3.0;
  double cloud_sigma = 0.15;
  int m = 30;
  double ring_sigma = ring_defaults::sigma;
  int ring_nz = ring_defaults::n_z;
  std::uint64_t seed = 0;
};

struct MatchingScene {
  DensityPtr density;
  Cloud X0;
  Cloud X1;              // rotated copy of X0, columns shuffled
  std::vector<int> truth;
  double delta_z = 0.0;
};

MatchingScene make_matching_scene(const MatchingSceneSpec& spec);

struct MatchingReport {
  std::vector<int> pairs;           // density-weighted method, bijection
  double accuracy = 0.0;
  std::vector<int> baseline_pairs;  // Euclidean assignment
  double baseline_accuracy = 0.0;
  std::vector<int> truth;
  std::vector<int> snapped;         // nearest target of each transported endpoint
  int snap_collisions = 0;
  TransportResult transport;
};

/// Transports X0 to X1, turns the transported endpoints into a bijection by
/// Euclidean assignment onto the target samples, and scores it and the plain
/// Euclidean assignment against the rotation ground truth.
MatchingReport run_matching(const MatchingScene& scene, const Lagrangian& lagrangian, const TransportConfig& cfg);

}  // namespace minact
