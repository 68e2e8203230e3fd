#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "minact/applications.hpp"
#include "minact/errors.hpp"

using namespace minact;
using testing::Rng;
using testing::vec2;

namespace {

double brute_force_cost(const Mat& cost, std::vector<int>* best_perm = nullptr) {
  std::vector<int> p(cost.rows());
  std::iota(p.begin(), p.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) c += cost(i, p[i]);
    if (c < best) {
      best = c;
      if (best_perm) *best_perm = p;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

Mat half_sq_cost(const Cloud& X0, const Cloud& X1) {
  Mat C(X0.cols(), X1.cols());
  for (Eigen::Index i = 0; i < X0.cols(); ++i)
    for (Eigen::Index j = 0; j < X1.cols(); ++j) C(i, j) = 0.5 * (X0.col(i) - X1.col(j)).squaredNorm();
  return C;
}

Mat random_symmetric(Rng& rng, int n) {
  Mat D = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) D(i, j) = D(j, i) = rng.uniform(0.1, 5.0);
  return D;
}

// Average linkage recomputed from the definition: mean over all member pairs.
std::vector<std::pair<std::vector<int>, std::vector<int>>> reference_merges(const Mat& D, int n_clusters) {
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < D.rows(); ++i) clusters.push_back({i});
  std::vector<std::pair<std::vector<int>, std::vector<int>>> merges;
  while (static_cast<int>(clusters.size()) > n_clusters) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double s = 0.0;
        for (int i : clusters[a])
          for (int j : clusters[b]) s += D(i, j);
        s /= static_cast<double>(clusters[a].size() * clusters[b].size());
        if (s < best) {
          best = s;
          ba = a;
          bb = b;
        }
      }
    merges.emplace_back(clusters[ba], clusters[bb]);
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    std::sort(clusters[ba].begin(), clusters[ba].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
  }
  return merges;
}

}  // namespace

TEST_CASE("seeded sampling is reproducible") {
  CHECK(split_seed(7, 1) != split_seed(7, 2));
  CHECK(split_seed(7, 1) == split_seed(7, 1));
  const Cloud a = sample_gaussian_cloud(vec2(1, 2), 0.3, 50, 9);
  CHECK((a - sample_gaussian_cloud(vec2(1, 2), 0.3, 50, 9)).norm() == 0.0);
  CHECK((a.rowwise().mean() - vec2(1, 2)).norm() < 0.2);
  const auto p = random_permutation(20, 4);
  CHECK(std::set<int>(p.begin(), p.end()).size() == 20);
  const Cloud s = subsample(a, 10, 3);
  CHECK(s.cols() == 10);
  CHECK_THROWS_AS(subsample(a, 51, 3), InvalidArgument);
}

TEST_CASE("linkage on separable blocks") {
  Mat D(4, 4);
  D << 0, 1, 10, 10, 1, 0, 10, 10, 10, 10, 0, 1, 10, 10, 1, 0;
  CHECK(average_linkage_cluster(D, 2).labels == std::vector<int>{0, 0, 1, 1});
  CHECK(average_linkage_cluster(D, 4).labels == std::vector<int>{0, 1, 2, 3});
  CHECK(average_linkage_cluster(D, 1).labels == std::vector<int>{0, 0, 0, 0});
  CHECK_THROWS_AS(average_linkage_cluster(D, 0), InvalidArgument);
}

TEST_CASE("linkage merges follow the definition") {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat D = random_symmetric(rng, 6);
    const Clustering c = average_linkage_cluster(D, 1);
    const auto ref = reference_merges(D, 1);
    REQUIRE(c.merges.size() == ref.size());
    for (std::size_t s = 0; s < ref.size(); ++s) {
      CHECK(c.merges[s].a == std::min(ref[s].first.front(), ref[s].second.front()));
      CHECK(c.merges[s].b == std::max(ref[s].first.front(), ref[s].second.front()));
      CHECK(c.merges[s].size == static_cast<int>(ref[s].first.size() + ref[s].second.size()));
    }
    for (int n = 1; n <= 6; ++n) {
      const auto base = average_linkage_cluster(D, n).labels;
      CHECK(average_linkage_cluster(0.1 * D, n).labels == base);
      CHECK(average_linkage_cluster(10.0 * D, n).labels == base);
    }
  }
}

TEST_CASE("assignment equals exhaustive search") {
  Rng rng(52);
  for (int m = 1; m <= 8; ++m) {
    for (int trial = 0; trial < 5; ++trial) {
      const Cloud X0 = rng.mat(2, m, -1, 1), X1 = rng.mat(2, m, -1, 1);
      const auto p = euclidean_assignment(X0, X1);
      CHECK(std::abs(assignment_cost(X0, X1, p) - brute_force_cost(half_sq_cost(X0, X1))) < 1e-12);
      const Mat C = rng.mat(m, m, 0, 10);
      const auto q = solve_assignment(C);
      double c = 0.0;
      for (int i = 0; i < m; ++i) c += C(i, q[i]);
      CHECK(std::abs(c - brute_force_cost(C)) < 1e-12);
    }
  }
}

TEST_CASE("assignment beats random permutations and respects translations") {
  Rng rng(53);
  const Cloud X0 = rng.mat(2, 40, -1, 1), X1 = rng.mat(2, 40, -1, 1);
  const double best = assignment_cost(X0, X1, euclidean_assignment(X0, X1));
  for (int i = 0; i < 1000; ++i) CHECK(best <= assignment_cost(X0, X1, random_permutation(40, i)));

  std::vector<int> id(40);
  std::iota(id.begin(), id.end(), 0);
  CHECK(euclidean_assignment(X0, X0) == id);
  CHECK(euclidean_assignment(X0, X0.colwise() + vec2(0.3, -0.2)) == id);
  CHECK_THROWS_AS(solve_assignment(Mat::Zero(2, 3)), InvalidArgument);
}

TEST_CASE("rotation ground truth") {
  const Cloud X0 = sample_gaussian_cloud(vec2(1, 0), 0.15, 12, 3);
  const double dz = 2 * M_PI / 3;
  const Cloud X1 = rotation2d(dz) * X0;
  std::vector<int> id(12);
  std::iota(id.begin(), id.end(), 0);
  CHECK(rotation_truth(X0, X1, dz) == id);
  CHECK(rotation_truth_accuracy(X0, X1, dz, id) == 1.0);
  std::vector<int> rev(id.rbegin(), id.rend());
  CHECK(rotation_truth_accuracy(X0, X1, dz, rev) <= 2.0 / 12);
  CHECK((rotation2d(M_PI / 2) * vec2(1, 0) - vec2(0, 1)).norm() < 1e-15);
}

TEST_CASE("transport dissimilarity under a flat density") {
  ConstantDensity one(1.0);
  TransportConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.rel_window = 1000;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Cloud A = sample_gaussian_cloud(vec2(0, 0), 0.3, 12, seed);
    const Cloud B = sample_gaussian_cloud(vec2(1.5, 0.5), 0.3, 12, seed + 100);
    cfg.seed = seed;
    const int k = 6;
    const DissimilarityEntry e = transport_dissimilarity(A, B, DensityLagrangian(one, 1.0), cfg, k);
    const Cloud a = subsample(A, k, split_seed(seed, 1)), b = subsample(B, k, split_seed(seed, 1));
    const double exact = brute_force_cost(half_sq_cost(a, b));
    CHECK(std::abs(e.total_cost - exact) <= 0.1 * exact);
    CHECK(e.objective == pairwise_dissimilarity(A, B, one, cfg, k));
  }
}

TEST_CASE("dissimilarity matrix structure and thread independence") {
  ConstantDensity one(1.0);
  TransportConfig cfg;
  cfg.max_iters = 2000;
  const Cloud A = sample_gaussian_cloud(vec2(0, 0), 0.3, 10, 5);
  const Cloud C = sample_gaussian_cloud(vec2(2, 0), 0.3, 10, 6);
  const std::vector<Cloud> clouds{A, A, C};
  const DissimilarityMatrix one_thread = dissimilarity_matrix(clouds, one, cfg, 6, 1);
  const DissimilarityMatrix three = dissimilarity_matrix(clouds, one, cfg, 6, 3);
  CHECK((one_thread.D - three.D).norm() == 0.0);
  CHECK((one_thread.D_sym - 0.5 * (one_thread.D + one_thread.D.transpose())).norm() == 0.0);
  CHECK(one_thread.provenance.size() == 9);
  const Mat& D = one_thread.D;
  const double cross = std::min({D(0, 2), D(2, 0), D(1, 2), D(2, 1)});
  for (int g = 0; g < 3; ++g) CHECK(D(g, g) < 1e-2 * cross);
  CHECK(D(0, 1) < 1e-2 * cross);

  const Mat E = euclidean_dissimilarity_matrix(clouds, 6, 7);
  CHECK(E(0, 1) == 0.0);
  CHECK(E(0, 2) > 1.0);
  CHECK((E - E.transpose()).norm() < 1e-12);
}

TEST_CASE("scenes") {
  const ClusterScene cs = make_cluster_scene(ClusterSceneSpec{});
  REQUIRE(cs.clouds.size() == 4);
  CHECK(cs.intended == std::vector<int>{0, 0, 1, 1});
  CHECK(cs.clouds[0].rowwise().mean()(0) < 0);
  CHECK(cs.clouds[2].rowwise().mean()(0) > 0);
  // On-ridge density beats the valley between the ridges.
  CHECK(cs.density->evaluate(vec2(1, 0)).rho > 5 * cs.density->evaluate(vec2(0, 0)).rho);

  const MatchingScene ms = make_matching_scene(MatchingSceneSpec{});
  CHECK(ms.X0.cols() == 30);
  CHECK(rotation_truth(ms.X0, ms.X1, ms.delta_z) == ms.truth);
  CHECK(rotation_truth_accuracy(ms.X0, ms.X1, ms.delta_z, ms.truth) == 1.0);
}
