#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdg/grounding/grounding.hpp"
#include "sdg/induction/kmeans.hpp"
#include "sdg/planner/planner.hpp"

namespace sdg::induction {

// One clustered subgoal occurrence: (experience, record) indices into the
// experience list the clustering was built from.
struct MemberRef {
  int experience = 0;
  int record = 0;
};

struct SkillCluster {
  int id = 0;
  std::string api_label;  // majority translate_api name
  bool mixed = false;     // more than one api present
  std::vector<MemberRef> members;
  std::vector<MemberRef> train_set;
  std::vector<MemberRef> val_set;
};

struct InductionClustering {
  ClusteringReport report;
  std::vector<SkillCluster> clusters;
  std::vector<MemberRef> members;  // row i of report.assignment/projection_2d
  std::vector<std::string> member_apis;
};

// Collects every subgoal record of the verified experiences, embeds its
// translated API name (the semantic key of the clustering; parameters are
// conditioning only), selects k by CH score over [k_min, k_max], and groups
// the members. Throws TooFewMembers when fewer than 2*k_min records exist.
InductionClustering cluster_experiences(const std::vector<grounding::GroundingExperience>& xs,
                                        planner::Planner& embedder, uint64_t seed, int k_min = 2,
                                        int k_max = 16);

// Deterministic shuffled split; val gets ceil((1-ratio)*n), at least 1.
// Throws TooFewMembers for clusters of size < 2.
void split_train_val(SkillCluster& cluster, double ratio, uint64_t seed);

void write_clustering_csv(const InductionClustering& c, const std::string& path);

}  // namespace sdg::induction
