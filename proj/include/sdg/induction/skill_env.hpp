#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdg/common/rng.hpp"
#include "sdg/grounding/grounding.hpp"
#include "sdg/induction/cluster.hpp"
#include "sdg/perception/perception.hpp"
#include "sdg/rl/trainer.hpp"

namespace sdg::induction {

// One resolved cluster member: the regenerated world, the restore-action
// prefix reaching the member's start state, its parsed check and the
// conditioning text (joined params).
struct SkillTask {
  std::shared_ptr<const gridworld::WorldState> initial;
  std::vector<int> prefix;
  checkdsl::ExprPtr check;
  std::string text;
};

using SkillTaskSet = std::vector<SkillTask>;

// Resolves member refs against the experience list (worlds regenerated once
// per (level, world_seed)). With restore disabled the prefixes are dropped
// and every episode starts from the raw initial world (ablation). Throws on
// dangling refs or an empty member list.
std::shared_ptr<const SkillTaskSet> build_skill_tasks(
    const std::vector<grounding::GroundingExperience>& xs, const std::vector<MemberRef>& members,
    bool restore);

enum class SampleMode { UniformRandom, RoundRobin };

// Multitask episode source: each reset picks a member task, restores its
// start state, and rewards the member's check under the skill horizon.
class MultiTaskSkillEnv : public rl::RolloutEnv {
 public:
  MultiTaskSkillEnv(std::shared_ptr<const SkillTaskSet> tasks, int horizon, SampleMode mode,
                    uint64_t seed);

  void reset() override;
  const gridworld::SymbolicView& view() const override { return view_; }
  const std::string& text() const override;
  rl::EnvStep step(int action) override;

  // State of the active episode (valid after reset()).
  const gridworld::WorldState& world() const { return ctx_->world(); }
  std::size_t current_task() const { return current_; }

 private:
  std::shared_ptr<const SkillTaskSet> tasks_;
  int horizon_;
  SampleMode mode_;
  Rng rng_;
  std::size_t next_ = 0;     // round-robin cursor
  std::size_t current_ = 0;  // active task index
  std::optional<perception::EpisodeContext> ctx_;
  gridworld::SymbolicView view_;
  int t_ = 0;
};

// Training factory: per-worker envs with uniform member sampling.
rl::EnvFactory build_skill_env(std::shared_ptr<const SkillTaskSet> tasks, int horizon,
                               uint64_t seed);

}  // namespace sdg::induction
