#include "sdg/induction/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "sdg/common/rng.hpp"

namespace sdg::induction {

InductionClustering cluster_experiences(const std::vector<grounding::GroundingExperience>& xs,
                                        planner::Planner& embedder, uint64_t seed, int k_min,
                                        int k_max) {
  InductionClustering out;
  std::map<std::string, std::vector<double>> embedding_cache;
  std::vector<std::vector<double>> points;

  for (int xi = 0; xi < static_cast<int>(xs.size()); ++xi) {
    const grounding::GroundingExperience& x = xs[static_cast<std::size_t>(xi)];
    if (!x.verified) continue;
    for (int ri = 0; ri < static_cast<int>(x.subgoals.size()); ++ri) {
      const std::string& api = x.subgoals[static_cast<std::size_t>(ri)].api;
      auto it = embedding_cache.find(api);
      if (it == embedding_cache.end()) {
        std::vector<double> v = embedder.embed(api).values;
        double norm = 0.0;
        for (double e : v) norm += e * e;
        norm = std::sqrt(norm);
        if (norm > 0.0)
          for (double& e : v) e /= norm;
        it = embedding_cache.emplace(api, std::move(v)).first;
      }
      out.members.push_back({xi, ri});
      out.member_apis.push_back(api);
      points.push_back(it->second);
    }
  }
  if (static_cast<int>(points.size()) < 2 * k_min)
    throw TooFewMembers("clustering needs at least " + std::to_string(2 * k_min) +
                        " subgoal records, have " + std::to_string(points.size()));

  out.report = select_k(points, seed, k_min, k_max);

  std::vector<SkillCluster> clusters(static_cast<std::size_t>(std::max(out.report.chosen_k, 1)));
  for (int c = 0; c < static_cast<int>(clusters.size()); ++c) clusters[static_cast<std::size_t>(c)].id = c;
  for (std::size_t i = 0; i < out.members.size(); ++i)
    clusters[static_cast<std::size_t>(out.report.assignment[i])].members.push_back(out.members[i]);

  for (SkillCluster& cluster : clusters) {
    std::map<std::string, int> votes;
    for (const MemberRef& m : cluster.members) {
      const std::string& api =
          xs[static_cast<std::size_t>(m.experience)].subgoals[static_cast<std::size_t>(m.record)].api;
      ++votes[api];
    }
    int best = -1;
    for (const auto& [api, count] : votes)
      if (count > best) {
        best = count;
        cluster.api_label = api;
      }
    cluster.mixed = votes.size() > 1;
  }

  // Drop empty clusters (possible when chosen_k came from a degenerate pick).
  std::erase_if(clusters, [](const SkillCluster& c) { return c.members.empty(); });
  out.clusters = std::move(clusters);
  return out;
}

void split_train_val(SkillCluster& cluster, double ratio, uint64_t seed) {
  const int n = static_cast<int>(cluster.members.size());
  if (n < 2)
    throw TooFewMembers("cluster " + std::to_string(cluster.id) + " has " + std::to_string(n) +
                        " member(s); need at least 2 to split");
  std::vector<MemberRef> shuffled = cluster.members;
  Rng rng(hash64("split-" + std::to_string(cluster.id), seed));
  for (int i = n - 1; i > 0; --i) {
    const int j = rng.uniform_int(0, i);
    std::swap(shuffled[static_cast<std::size_t>(i)], shuffled[static_cast<std::size_t>(j)]);
  }
  int train_n = static_cast<int>(std::floor(ratio * n));
  train_n = std::clamp(train_n, 1, n - 1);  // both sides non-empty
  cluster.train_set.assign(shuffled.begin(), shuffled.begin() + train_n);
  cluster.val_set.assign(shuffled.begin() + train_n, shuffled.end());
}

void write_clustering_csv(const InductionClustering& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "member,experience,record,api,cluster,x,y\n";
  for (std::size_t i = 0; i < c.members.size(); ++i) {
    const auto& xy = c.report.projection_2d[i];
    out << i << "," << c.members[i].experience << "," << c.members[i].record << ","
        << c.member_apis[i] << "," << c.report.assignment[i] << "," << xy[0] << "," << xy[1]
        << "\n";
  }
}

}  // namespace sdg::induction
