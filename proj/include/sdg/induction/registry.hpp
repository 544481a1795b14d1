#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sdg/rl/net.hpp"

namespace sdg::induction {

struct SkillEntry {
  std::string label;      // GroundScript skill name (unique)
  std::string api_label;  // majority api of the source cluster
  int cluster_id = 0;
  int member_count = 0;
  double val_success = 0.0;
  bool mixed = false;
  std::string params_file;  // relative to the registry directory
};

// Trained skills addressable by label or by API name (with the historical
// go_next_to_door alias for go_to_door).
class SkillRegistry {
 public:
  struct LoadedSkill {
    SkillEntry info;
    std::shared_ptr<const rl::ActorCriticNet<float>> net;
  };

  void add_skill(SkillEntry info, rl::ActorCriticNet<float> net);
  const LoadedSkill* find(const std::string& name) const;
  const std::vector<LoadedSkill>& skills() const { return skills_; }

  int chosen_k = 0;
  bool degenerate = false;
  std::map<int, double> ch_scores;  // degenerate entries stored as +inf

 private:
  std::vector<LoadedSkill> skills_;
  std::map<std::string, std::size_t> by_name_;
};

// Directory layout: registry.json + one params file per skill.
void save_registry(const SkillRegistry& reg, const std::string& dir);
SkillRegistry load_registry(const std::string& dir);

}  // namespace sdg::induction
