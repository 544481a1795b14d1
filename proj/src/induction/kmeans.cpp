#include "sdg/induction/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "sdg/common/rng.hpp"

namespace sdg::induction {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

int count_distinct(const std::vector<std::vector<double>>& points) {
  std::set<std::vector<double>> uniq(points.begin(), points.end());
  return static_cast<int>(uniq.size());
}

// k-means++: centroids drawn with probability proportional to the squared
// distance to the nearest already-chosen centroid.
std::vector<std::vector<double>> seed_centroids(const std::vector<std::vector<double>>& points,
                                                int k, Rng& rng) {
  const std::size_t n = points.size();
  std::vector<std::vector<double>> centroids;
  centroids.push_back(points[rng.uniform_int(0, static_cast<int>(n) - 1)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (const auto& c : centroids) best = std::min(best, sq_dist(points[i], c));
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n) - 1));
    } else {
      double r = rng.uniform() * total;
      while (pick + 1 < n && r >= d2[pick]) r -= d2[pick++];
    }
    centroids.push_back(points[pick]);
  }
  return centroids;
}

}  // namespace

double cosine_sim(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("cosine_sim: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw ZeroVector("cosine_sim: zero-norm vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, uint64_t seed) {
  const int n = static_cast<int>(points.size());
  if (k < 1) throw InvalidK("k must be >= 1");
  if (n == 0) throw InvalidK("no points");
  if (k > count_distinct(points))
    throw InvalidK("k = " + std::to_string(k) + " exceeds distinct point count");

  Rng rng(seed);
  KMeansResult res;
  res.centroids = seed_centroids(points, k, rng);
  res.assignment.assign(static_cast<std::size_t>(n), 0);

  for (int iter = 0; iter < 300; ++iter) {
    // Assignment step.
    double objective = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      int arg = 0;
      for (int c = 0; c < k; ++c) {
        const double d = sq_dist(points[static_cast<std::size_t>(i)],
                                 res.centroids[static_cast<std::size_t>(c)]);
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      res.assignment[static_cast<std::size_t>(i)] = arg;
      objective += best;
    }
    res.objective = objective;
    res.objective_trace.push_back(objective);

    // Update step.
    const std::size_t dim = points[0].size();
    std::vector<std::vector<double>> next(static_cast<std::size_t>(k),
                                          std::vector<double>(dim, 0.0));
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      const int c = res.assignment[static_cast<std::size_t>(i)];
      ++counts[static_cast<std::size_t>(c)];
      for (std::size_t d = 0; d < dim; ++d)
        next[static_cast<std::size_t>(c)][d] += points[static_cast<std::size_t>(i)][d];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        for (double& v : next[static_cast<std::size_t>(c)])
          v /= counts[static_cast<std::size_t>(c)];
      } else {
        // Re-seed an empty cluster from the point farthest from its centroid.
        double worst = -1.0;
        int arg = 0;
        for (int i = 0; i < n; ++i) {
          const int ci = res.assignment[static_cast<std::size_t>(i)];
          const double d = sq_dist(points[static_cast<std::size_t>(i)],
                                   res.centroids[static_cast<std::size_t>(ci)]);
          if (d > worst) {
            worst = d;
            arg = i;
          }
        }
        next[static_cast<std::size_t>(c)] = points[static_cast<std::size_t>(arg)];
      }
    }

    double shift = 0.0;
    for (int c = 0; c < k; ++c)
      shift = std::max(shift, sq_dist(res.centroids[static_cast<std::size_t>(c)],
                                      next[static_cast<std::size_t>(c)]));
    res.centroids = std::move(next);
    if (std::sqrt(shift) < 1e-8) break;
  }

  // Final assignment against the converged centroids.
  double objective = 0.0;
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::max();
    int arg = 0;
    for (int c = 0; c < k; ++c) {
      const double d = sq_dist(points[static_cast<std::size_t>(i)],
                               res.centroids[static_cast<std::size_t>(c)]);
      if (d < best) {
        best = d;
        arg = c;
      }
    }
    res.assignment[static_cast<std::size_t>(i)] = arg;
    objective += best;
  }
  res.objective = objective;
  res.objective_trace.push_back(objective);
  return res;
}

KMeansResult kmeans_best(const std::vector<std::vector<double>>& points, int k, uint64_t seed,
                         int restarts) {
  KMeansResult best;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    KMeansResult cur = kmeans(points, k, hash64("kmeans-restart-" + std::to_string(r), seed));
    if (!have || cur.objective < best.objective) {
      best = std::move(cur);
      have = true;
    }
  }
  return best;
}

double ch_score(const std::vector<std::vector<double>>& points, const std::vector<int>& assignment,
                int k) {
  const int n = static_cast<int>(points.size());
  if (k < 2) throw Error("ch_score: need at least 2 clusters");
  if (n <= k) throw Error("ch_score: need more points than clusters");
  const std::size_t dim = points[0].size();

  std::vector<double> grand(dim, 0.0);
  for (const auto& p : points)
    for (std::size_t d = 0; d < dim; ++d) grand[d] += p[d];
  for (double& v : grand) v /= n;

  std::vector<std::vector<double>> centers(static_cast<std::size_t>(k),
                                           std::vector<double>(dim, 0.0));
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)]);
    ++counts[c];
    for (std::size_t d = 0; d < dim; ++d) centers[c][d] += points[static_cast<std::size_t>(i)][d];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) continue;
    for (double& v : centers[static_cast<std::size_t>(c)]) v /= counts[static_cast<std::size_t>(c)];
  }

  double between = 0.0;
  for (int c = 0; c < k; ++c)
    between += counts[static_cast<std::size_t>(c)] *
               sq_dist(centers[static_cast<std::size_t>(c)], grand);
  double within = 0.0;
  for (int i = 0; i < n; ++i)
    within += sq_dist(points[static_cast<std::size_t>(i)],
                      centers[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])]);

  if (within == 0.0) return std::numeric_limits<double>::infinity();
  return (between / (k - 1)) / (within / (n - k));
}

ClusteringReport select_k(const std::vector<std::vector<double>>& points, uint64_t seed, int k_min,
                          int k_max) {
  ClusteringReport report;
  const int n = static_cast<int>(points.size());
  std::map<int, KMeansResult> fits;
  for (int k = k_min; k <= k_max && k < n; ++k) {
    KMeansResult fit;
    try {
      fit = kmeans_best(points, k, hash64("select-k-" + std::to_string(k), seed), 5);
    } catch (const InvalidK&) {
      continue;  // recorded as absent
    }
    report.ch_scores[k] = ch_score(points, fit.assignment, k);
    fits[k] = std::move(fit);
  }

  int best_k = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto& [k, score] : report.ch_scores) {
    if (std::isinf(score)) continue;
    if (score > best_score) {
      best_score = score;
      best_k = k;
    }
  }
  if (best_k == 0) {
    // Every feasible k was degenerate (or none feasible at all).
    report.degenerate = true;
    for (const auto& [k, score] : report.ch_scores) {
      (void)score;
      best_k = k;
      break;  // smallest degenerate k
    }
    if (best_k == 0) {
      report.chosen_k = 1;
      report.assignment.assign(points.size(), 0);
    }
  }
  if (best_k != 0) {
    report.chosen_k = best_k;
    report.assignment = fits[best_k].assignment;
    report.centroids = fits[best_k].centroids;
  }

  // Fixed Gaussian 2-D projection for plot output.
  if (!points.empty()) {
    const std::size_t dim = points[0].size();
    Rng proj_rng(0x70726f6a32640001ull);
    std::vector<std::array<double, 2>> axes(dim);
    for (std::size_t d = 0; d < dim; ++d)
      axes[d] = {proj_rng.normal() / std::sqrt(static_cast<double>(dim)),
                 proj_rng.normal() / std::sqrt(static_cast<double>(dim))};
    report.projection_2d.reserve(points.size());
    for (const auto& p : points) {
      std::array<double, 2> xy{0.0, 0.0};
      for (std::size_t d = 0; d < dim; ++d) {
        xy[0] += p[d] * axes[d][0];
        xy[1] += p[d] * axes[d][1];
      }
      report.projection_2d.push_back(xy);
    }
  }
  return report;
}

}  // namespace sdg::induction
