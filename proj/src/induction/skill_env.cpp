#include "sdg/induction/skill_env.hpp"

#include <map>

namespace sdg::induction {

std::shared_ptr<const SkillTaskSet> build_skill_tasks(
    const std::vector<grounding::GroundingExperience>& xs, const std::vector<MemberRef>& members,
    bool restore) {
  if (members.empty()) throw Error("skill task set is empty");
  std::map<std::pair<std::string, uint64_t>, std::shared_ptr<const gridworld::WorldState>> worlds;
  auto tasks = std::make_shared<SkillTaskSet>();
  tasks->reserve(members.size());
  for (const MemberRef& m : members) {
    if (m.experience < 0 || m.experience >= static_cast<int>(xs.size()))
      throw Error("member references experience " + std::to_string(m.experience) +
                  " outside the store");
    const grounding::GroundingExperience& x = xs[static_cast<std::size_t>(m.experience)];
    if (m.record < 0 || m.record >= static_cast<int>(x.subgoals.size()))
      throw Error("member references record " + std::to_string(m.record) + " outside experience");
    const auto key = std::make_pair(x.level, x.world_seed);
    auto it = worlds.find(key);
    if (it == worlds.end()) {
      const auto level = gridworld::level_from_name(x.level);
      if (!level) throw Error("experience names unknown level: " + x.level);
      auto [task, w] = gridworld::generate_task(*level, x.world_seed);
      (void)task;
      it = worlds.emplace(key, std::make_shared<const gridworld::WorldState>(std::move(w))).first;
    }
    SkillTask t;
    t.initial = it->second;
    if (restore)
      for (int r = 0; r < m.record; ++r) {
        const auto& seq = x.subgoals[static_cast<std::size_t>(r)].restore_actions;
        t.prefix.insert(t.prefix.end(), seq.begin(), seq.end());
      }
    const grounding::SubgoalRecord& rec = x.subgoals[static_cast<std::size_t>(m.record)];
    t.check = checkdsl::parse_check(rec.check_text);
    t.text = grounding::condition_text(rec.params);
    tasks->push_back(std::move(t));
  }
  return tasks;
}

MultiTaskSkillEnv::MultiTaskSkillEnv(std::shared_ptr<const SkillTaskSet> tasks, int horizon,
                                     SampleMode mode, uint64_t seed)
    : tasks_(std::move(tasks)), horizon_(horizon), mode_(mode), rng_(seed) {
  if (!tasks_ || tasks_->empty()) throw Error("skill env needs a non-empty task set");
}

void MultiTaskSkillEnv::reset() {
  const auto n = tasks_->size();
  current_ = mode_ == SampleMode::RoundRobin
                 ? (next_++ % n)
                 : static_cast<std::size_t>(rng_.uniform_int(0, static_cast<int>(n) - 1));
  const SkillTask& task = (*tasks_)[current_];
  ctx_.emplace(*task.initial);
  for (int a : task.prefix) ctx_->apply(static_cast<gridworld::Action>(a));
  t_ = 0;
  view_ = gridworld::observe(ctx_->world());
}

const std::string& MultiTaskSkillEnv::text() const { return (*tasks_)[current_].text; }

rl::EnvStep MultiTaskSkillEnv::step(int action) {
  const SkillTask& task = (*tasks_)[current_];
  ctx_->apply(static_cast<gridworld::Action>(action));
  ++t_;
  view_ = gridworld::observe(ctx_->world());
  rl::EnvStep out;
  if (checkdsl::eval_check(task.check, ctx_->last_snapshot())) {
    out.done = true;
    out.success = true;
    out.reward = gridworld::env_reward(true, t_, horizon_);
  } else if (t_ >= horizon_) {
    out.done = true;
  }
  return out;
}

rl::EnvFactory build_skill_env(std::shared_ptr<const SkillTaskSet> tasks, int horizon,
                               uint64_t seed) {
  return [tasks, horizon, seed](int worker) {
    return std::make_unique<MultiTaskSkillEnv>(
        tasks, horizon, SampleMode::UniformRandom,
        hash64("skill-env-worker-" + std::to_string(worker), seed));
  };
}

}  // namespace sdg::induction
