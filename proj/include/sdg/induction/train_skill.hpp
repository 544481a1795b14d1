#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdg/induction/skill_env.hpp"
#include "sdg/rl/config.hpp"

namespace sdg::induction {

struct SkillCurveRow {
  long frames = 0;
  double train_success = 0.0;
  double val_success = 0.0;
};

struct SkillModel {
  int cluster_id = 0;
  std::string api_label;
  std::vector<float> params;  // best-val checkpoint, flat registry order
  double val_success = 0.0;   // equals max val over curves
  std::vector<SkillCurveRow> curves;
};

// Multitask PPO over the cluster's train members; every ~10k frames runs 100
// greedy episodes on the train and val sets (round-robin over members) and
// keeps the earliest checkpoint attaining the best val success.
SkillModel train_skill(const std::vector<grounding::GroundingExperience>& xs,
                       const SkillCluster& cluster, const rl::PPOConfig& cfg, uint64_t seed,
                       bool restore = true);

void write_curves_csv(const std::vector<SkillCurveRow>& curves, const std::string& path);

}  // namespace sdg::induction
