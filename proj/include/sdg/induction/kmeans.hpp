#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "sdg/common/errors.hpp"

namespace sdg::induction {

struct ZeroVector : Error {
  using Error::Error;
};
struct InvalidK : Error {
  using Error::Error;
};
struct TooFewMembers : Error {
  using Error::Error;
};

double cosine_sim(const std::vector<double>& a, const std::vector<double>& b);

struct KMeansResult {
  std::vector<int> assignment;                  // point index -> cluster id
  std::vector<std::vector<double>> centroids;   // k centroids
  double objective = 0.0;                       // within-cluster sum of squares
  std::vector<double> objective_trace;          // per Lloyd iteration, non-increasing
};

// Euclidean Lloyd iterations with k-means++ seeding; at most 300 iterations
// or until the largest centroid shift drops below 1e-8. Empty clusters are
// re-seeded from the point farthest from its centroid. Callers that want
// cosine geometry pass L2-normalized points. Throws InvalidK when k exceeds
// the number of distinct points (or k < 1).
KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, uint64_t seed);

// Best objective over `restarts` seeded runs.
KMeansResult kmeans_best(const std::vector<std::vector<double>>& points, int k, uint64_t seed,
                         int restarts);

// Calinski-Harabasz: (B/(k-1)) / (W/(n-k)). Returns +infinity when W == 0
// (degenerate, perfectly tight clusters). Requires 2 <= k < n.
double ch_score(const std::vector<std::vector<double>>& points, const std::vector<int>& assignment,
                int k);

struct ClusteringReport {
  int chosen_k = 0;
  bool degenerate = false;            // chosen score was +inf (or no k feasible)
  std::map<int, double> ch_scores;    // infeasible k absent
  std::vector<int> assignment;        // for chosen_k
  std::vector<std::vector<double>> centroids;
  std::vector<std::array<double, 2>> projection_2d;  // fixed Gaussian projection
};

// Runs kmeans_best (5 restarts) for each k in [k_min, k_max], scores with CH,
// and picks the argmax; +inf scores are excluded unless every feasible k is
// degenerate. Ties go to the smallest k.
ClusteringReport select_k(const std::vector<std::vector<double>>& points, uint64_t seed,
                          int k_min = 2, int k_max = 16);

}  // namespace sdg::induction
