#include "sdg/induction/train_skill.hpp"

#include <algorithm>
#include <fstream>

namespace sdg::induction {

namespace {

double greedy_success_rate(const rl::ActorCriticNet<float>& net,
                           std::shared_ptr<const SkillTaskSet> tasks, int horizon, int episodes) {
  MultiTaskSkillEnv env(std::move(tasks), horizon, SampleMode::RoundRobin, 0);
  int successes = 0;
  for (int e = 0; e < episodes; ++e)
    if (rl::run_greedy_episode(net, env, horizon).success) ++successes;
  return static_cast<double>(successes) / episodes;
}

}  // namespace

SkillModel train_skill(const std::vector<grounding::GroundingExperience>& xs,
                       const SkillCluster& cluster, const rl::PPOConfig& cfg, uint64_t seed,
                       bool restore) {
  if (cluster.train_set.empty() || cluster.val_set.empty())
    throw Error("cluster " + std::to_string(cluster.id) + " is not split into train/val");
  const auto train_tasks = build_skill_tasks(xs, cluster.train_set, restore);
  const auto val_tasks = build_skill_tasks(xs, cluster.val_set, restore);

  rl::ActorCriticNet<float> net{rl::NetConfig{}};
  net.init_params(hash64("skill-net-" + std::to_string(cluster.id), seed));

  SkillModel model;
  model.cluster_id = cluster.id;
  model.api_label = cluster.api_label;

  constexpr long kEvalEvery = 10000;
  constexpr int kEvalEpisodes = 100;
  long last_eval = -kEvalEvery;
  double best_val = -1.0;
  auto evaluate = [&](long frames, const rl::ActorCriticNet<float>& current) {
    SkillCurveRow row;
    row.frames = frames;
    row.train_success = greedy_success_rate(current, train_tasks, cfg.horizon, kEvalEpisodes);
    row.val_success = greedy_success_rate(current, val_tasks, cfg.horizon, kEvalEpisodes);
    model.curves.push_back(row);
    if (row.val_success > best_val) {  // earliest checkpoint at the max
      best_val = row.val_success;
      model.params = current.params();
    }
  };

  rl::TrainHooks hooks;
  hooks.after_update = [&](long frames, rl::ActorCriticNet<float>& current) {
    if (frames - last_eval >= kEvalEvery) {
      last_eval = frames;
      evaluate(frames, current);
    }
    return true;
  };

  const rl::EnvFactory factory =
      build_skill_env(train_tasks, cfg.horizon, hash64("skill-train", seed));
  rl::TrainReport report = rl::train_policy(factory, cfg, net, /*stop_on_first_success=*/false,
                                            &hooks);
  if (model.curves.empty() || model.curves.back().frames < report.total_frames)
    evaluate(report.total_frames, net);

  model.val_success = best_val < 0.0 ? 0.0 : best_val;
  if (model.params.empty()) model.params = net.params();
  return model;
}

void write_curves_csv(const std::vector<SkillCurveRow>& curves, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "frames,train_success,val_success\n";
  for (const SkillCurveRow& row : curves)
    out << row.frames << "," << row.train_success << "," << row.val_success << "\n";
}

}  // namespace sdg::induction
