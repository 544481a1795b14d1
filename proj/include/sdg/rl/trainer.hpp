#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sdg/gridworld/types.hpp"
#include "sdg/rl/config.hpp"
#include "sdg/rl/net.hpp"

namespace sdg::rl {

struct EnvStep {
  double reward = 0.0;
  bool done = false;
  bool success = false;
};

// Minimal environment contract for rollout collection. `view()` and `text()`
// must be valid after reset() and after any non-terminal step(); the env owns
// its horizon (a timeout surfaces as done with reward 0 and success false).
class RolloutEnv {
 public:
  virtual ~RolloutEnv() = default;
  virtual void reset() = 0;
  virtual const gridworld::SymbolicView& view() const = 0;
  virtual const std::string& text() const = 0;
  virtual EnvStep step(int action) = 0;
};

using EnvFactory = std::function<std::unique_ptr<RolloutEnv>(int worker)>;

struct TrainReportRow {
  long frames = 0;
  double mean_return = 0.0;
  double success_rate = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

struct TrainReport {
  std::vector<TrainReportRow> rows;
  long total_frames = 0;
  bool found_success = false;
  std::vector<int> success_actions;  // first successful episode, verbatim
};

struct TrainHooks {
  // Called after every update with cumulative frames; return false to stop.
  std::function<bool(long frames, ActorCriticNet<float>& net)> after_update;
};

// Rollout/update loop: `workers` env slots stepped round-robin (steps outer,
// worker index inner, so runs are seed-deterministic), GAE per worker stream,
// whole-batch advantage normalization, then clipped-surrogate updates. When
// `stop_on_first_success` is set, collection halts at the first successful
// episode and its action sequence is returned without further updates.
TrainReport train_policy(const EnvFactory& factory, const PPOConfig& cfg,
                         ActorCriticNet<float>& net, bool stop_on_first_success,
                         const TrainHooks* hooks = nullptr);

void write_report_csv(const TrainReport& report, const std::string& path);

struct GreedyResult {
  bool success = false;
  int steps = 0;
  double episode_return = 0.0;
  std::vector<int> actions;
};

// One episode with argmax actions in eval mode (no dropout, no sampling).
GreedyResult run_greedy_episode(const ActorCriticNet<float>& net, RolloutEnv& env, int max_steps);

}  // namespace sdg::rl
