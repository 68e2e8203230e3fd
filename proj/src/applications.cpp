#include "minact/applications.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "minact/errors.hpp"

namespace minact {

std::uint64_t split_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

}  // namespace

Cloud sample_gaussian_cloud(const Vec& center, double sigma, int m, std::uint64_t seed) {
  if (m < 0 || !(sigma >= 0.0)) throw InvalidArgument("sample_gaussian_cloud: need m >= 0 and sigma >= 0");
  std::mt19937_64 gen(seed);
  const auto d = center.size();
  Cloud X(d, m);
  Eigen::Index filled = 0;
  Vec z(d * m);
  while (filled < z.size()) {
    const double u1 = 1.0 - uniform01(gen);  // (0, 1]
    const double u2 = uniform01(gen);
    const double r = std::sqrt(-2.0 * std::log(u1));
    z(filled++) = r * std::cos(2.0 * M_PI * u2);
    if (filled < z.size()) z(filled++) = r * std::sin(2.0 * M_PI * u2);
  }
  for (int j = 0; j < m; ++j) X.col(j) = center + sigma * z.segment(j * d, d);
  return X;
}

std::vector<int> random_permutation(int n, std::uint64_t seed) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::mt19937_64 gen(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(gen() % static_cast<std::uint64_t>(i + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

Cloud subsample(const Cloud& X, int k, std::uint64_t seed) {
  if (k < 1 || k > X.cols()) throw InvalidArgument("subsample: need 1 <= k <= cloud size");
  const auto p = random_permutation(static_cast<int>(X.cols()), seed);
  Cloud out(X.rows(), k);
  for (int j = 0; j < k; ++j) out.col(j) = X.col(p[j]);
  return out;
}

DissimilarityEntry transport_dissimilarity(const Cloud& cloud_g, const Cloud& cloud_h, const Lagrangian& lagrangian,
                                           const TransportConfig& cfg, int k) {
  if (cloud_g.cols() < 1 || cloud_h.cols() < 1) throw InvalidArgument("dissimilarity: empty cloud");
  if (k > std::min(cloud_g.cols(), cloud_h.cols())) throw InvalidArgument("dissimilarity: k exceeds a cloud size");
  const std::uint64_t s = split_seed(cfg.seed, 1);
  const TransportResult r = solve_transport(subsample(cloud_g, k, s), subsample(cloud_h, k, s), lagrangian, cfg);
  DissimilarityEntry e;
  e.objective = r.objective;
  e.total_cost = r.total_cost;
  e.penalty0 = r.penalty0;
  e.penalty1 = r.penalty1;
  e.iterations = r.iterations;
  e.converged = r.converged;
  return e;
}

double pairwise_dissimilarity(const Cloud& cloud_g, const Cloud& cloud_h, const DensityModel& model,
                              const TransportConfig& cfg, int k) {
  return transport_dissimilarity(cloud_g, cloud_h, DensityLagrangian(model, cfg.alpha), cfg, k).objective;
}

DissimilarityMatrix dissimilarity_matrix(const std::vector<Cloud>& clouds, const Lagrangian& lagrangian,
                                         const TransportConfig& cfg, int k, int n_threads) {
  const int G = static_cast<int>(clouds.size());
  if (G < 2) throw InvalidArgument("dissimilarity_matrix: need at least two clouds");
  std::vector<DissimilarityEntry> entries(G * G);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  const auto worker = [&] {
    for (int idx = next++; idx < G * G; idx = next++) {
      try {
        entries[idx] = transport_dissimilarity(clouds[idx / G], clouds[idx % G], lagrangian, cfg, k);
        entries[idx].g = idx / G;
        entries[idx].h = idx % G;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = G * G;
      }
    }
  };
  if (n_threads <= 0) n_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n_threads = std::min(n_threads, G * G);
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  DissimilarityMatrix out;
  out.D.resize(G, G);
  for (int i = 0; i < G * G; ++i) out.D(i / G, i % G) = entries[i].objective;
  out.D_sym = 0.5 * (out.D + out.D.transpose());
  out.provenance = std::move(entries);
  return out;
}

DissimilarityMatrix dissimilarity_matrix(const std::vector<Cloud>& clouds, const DensityModel& model,
                                         const TransportConfig& cfg, int k, int n_threads) {
  return dissimilarity_matrix(clouds, DensityLagrangian(model, cfg.alpha), cfg, k, n_threads);
}

double euclidean_dissimilarity(const Cloud& cloud_g, const Cloud& cloud_h, int k, std::uint64_t seed) {
  const std::uint64_t s = split_seed(seed, 1);
  const Cloud A = subsample(cloud_g, k, s), B = subsample(cloud_h, k, s);
  return assignment_cost(A, B, euclidean_assignment(A, B)) / k;
}

Mat euclidean_dissimilarity_matrix(const std::vector<Cloud>& clouds, int k, std::uint64_t seed) {
  const auto G = static_cast<Eigen::Index>(clouds.size());
  Mat D(G, G);
  for (Eigen::Index g = 0; g < G; ++g)
    for (Eigen::Index h = 0; h < G; ++h) D(g, h) = euclidean_dissimilarity(clouds[g], clouds[h], k, seed);
  return D;
}

Clustering average_linkage_cluster(const Mat& D_sym, int n_clusters) {
  const int G = static_cast<int>(D_sym.rows());
  if (D_sym.cols() != G) throw InvalidArgument("average_linkage_cluster: matrix must be square");
  if (n_clusters < 1 || n_clusters > G) throw InvalidArgument("average_linkage_cluster: need 1 <= n_clusters <= G");

  std::vector<std::vector<int>> clusters(G);
  for (int i = 0; i < G; ++i) clusters[i] = {i};
  Clustering out;
  // Clusters stay sorted by smallest member, so index order is id order.
  while (static_cast<int>(clusters.size()) > n_clusters) {
    std::size_t ba = 0, bb = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double sum = 0.0;
        for (int i : clusters[a])
          for (int j : clusters[b]) sum += D_sym(i, j);
        const double avg = sum / static_cast<double>(clusters[a].size() * clusters[b].size());
        if (avg < best) {
          best = avg;
          ba = a;
          bb = b;
        }
      }
    out.merges.push_back({clusters[ba].front(), clusters[bb].front(), best,
                          static_cast<int>(clusters[ba].size() + clusters[bb].size())});
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    std::sort(clusters[ba].begin(), clusters[ba].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
  }
  out.labels.assign(G, 0);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (int i : clusters[c]) out.labels[i] = static_cast<int>(c);
  return out;
}

std::vector<int> solve_assignment(const Mat& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw InvalidArgument("solve_assignment: cost matrix must be square");
  // Shortest augmenting paths with potentials, 1-based with a virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assign(n);
  for (int j = 1; j <= n; ++j) assign[p[j] - 1] = j - 1;
  return assign;
}

std::vector<int> euclidean_assignment(const Cloud& X0, const Cloud& X1) {
  if (X0.rows() != X1.rows() || X0.cols() != X1.cols())
    throw InvalidArgument("euclidean_assignment: clouds must have equal shape");
  Mat C(X0.cols(), X1.cols());
  for (Eigen::Index i = 0; i < X0.cols(); ++i)
    for (Eigen::Index j = 0; j < X1.cols(); ++j) C(i, j) = 0.5 * (X0.col(i) - X1.col(j)).squaredNorm();
  return solve_assignment(C);
}

double assignment_cost(const Cloud& X0, const Cloud& X1, const std::vector<int>& pairs) {
  if (static_cast<Eigen::Index>(pairs.size()) != X0.cols()) throw InvalidArgument("assignment_cost: size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    total += 0.5 * (X0.col(static_cast<Eigen::Index>(i)) - X1.col(pairs[i])).squaredNorm();
  return total;
}

Mat rotation2d(double angle) {
  Mat R(2, 2);
  R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return R;
}

std::vector<int> rotation_truth(const Cloud& X0, const Cloud& X1, double delta_z) {
  if (X0.rows() != 2 || X1.rows() != 2) throw UnsupportedDimension("rotation_truth: planar clouds only");
  const Cloud RX0 = rotation2d(delta_z) * X0;
  return snap_to_targets(RX0, X1).target;
}

double rotation_truth_accuracy(const Cloud& X0, const Cloud& X1, double delta_z, const std::vector<int>& pairs) {
  if (static_cast<Eigen::Index>(pairs.size()) != X0.cols())
    throw InvalidArgument("rotation_truth_accuracy: one partner per source required");
  if (pairs.empty()) return 0.0;
  const auto truth = rotation_truth(X0, X1, delta_z);
  int hits = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) hits += pairs[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

ClusterScene make_cluster_scene(const ClusterSceneSpec& spec) {
  if (spec.ridge_components < 1 || spec.cloud_size < 1) throw InvalidArgument("cluster scene: empty ridge or cloud");
  std::vector<GaussianMixture::Component> comps;
  for (double side : {-1.0, 1.0})
    for (int i = 0; i < spec.ridge_components; ++i) {
      const double y = spec.ridge_components == 1
                           ? 0.0
                           : -spec.ridge_half_len + 2.0 * spec.ridge_half_len * i / (spec.ridge_components - 1);
      comps.push_back({1.0, vec2(side * spec.ridge_x, y), spec.ridge_sigma});
    }
  ClusterScene scene;
  scene.density = std::make_shared<GaussianMixture>(std::move(comps));
  int stream = 0;
  for (double x : {-spec.ridge_x, spec.ridge_x})
    for (double y : {spec.cloud_y, -spec.cloud_y})
      scene.clouds.push_back(
          sample_gaussian_cloud(vec2(x, y), spec.cloud_sigma, spec.cloud_size, split_seed(spec.seed, 100 + stream++)));
  scene.intended = {0, 0, 1, 1};
  return scene;
}

MatchingScene make_matching_scene(const MatchingSceneSpec& spec) {
  if (spec.m < 2) throw InvalidArgument("matching scene: need m >= 2");
  MatchingScene scene;
  scene.density = ring_mixture(spec.ring_sigma, 0.0, 2.0 * M_PI, spec.ring_nz, ring_defaults::c_rho);
  scene.delta_z = spec.delta_z;
  scene.X0 = sample_gaussian_cloud(vec2(std::cos(spec.z0), std::sin(spec.z0)), spec.cloud_sigma, spec.m,
                                   split_seed(spec.seed, 200));
  const Cloud rotated = rotation2d(spec.delta_z) * scene.X0;
  // Shuffle so that the index-matched initialization carries no information.
  const auto perm = random_permutation(spec.m, split_seed(spec.seed, 201));
  scene.X1.resize(2, spec.m);
  scene.truth.assign(spec.m, 0);
  for (int i = 0; i < spec.m; ++i) {
    scene.X1.col(perm[i]) = rotated.col(i);
    scene.truth[i] = perm[i];
  }
  return scene;
}

MatchingReport run_matching(const MatchingScene& scene, const Lagrangian& lagrangian, const TransportConfig& cfg) {
  MatchingReport rep;
  rep.transport = solve_transport(scene.X0, scene.X1, lagrangian, cfg);
  const SnapResult snap = snap_to_targets(rep.transport.W1, scene.X1);
  rep.snapped = snap.target;
  rep.snap_collisions = snap.collisions;
  rep.pairs = euclidean_assignment(rep.transport.W1, scene.X1);
  rep.truth = rotation_truth(scene.X0, scene.X1, scene.delta_z);
  rep.accuracy = rotation_truth_accuracy(scene.X0, scene.X1, scene.delta_z, rep.pairs);
  rep.baseline_pairs = euclidean_assignment(scene.X0, scene.X1);
  rep.baseline_accuracy = rotation_truth_accuracy(scene.X0, scene.X1, scene.delta_z, rep.baseline_pairs);
  return rep;
}

}  // namespace minact
