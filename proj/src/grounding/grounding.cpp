#include "sdg/grounding/grounding.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sdg/common/rng.hpp"
#include "sdg/perception/perception.hpp"
#include "sdg/rl/trainer.hpp"

namespace sdg::grounding {

namespace {

using nlohmann::json;

// Rollout environment for one subgoal: reset restores the recorded prefix,
// reward is the parsed check evaluated after every primitive action.
class SubgoalEnv : public rl::RolloutEnv {
 public:
  SubgoalEnv(const gridworld::WorldState& initial, const std::vector<int>* prefix,
             checkdsl::ExprPtr check, std::string text, int horizon)
      : initial_(initial),
        prefix_(prefix),
        check_(std::move(check)),
        text_(std::move(text)),
        horizon_(horizon) {}

  void reset() override {
    ctx_.emplace(initial_);
    if (prefix_)
      for (int a : *prefix_) ctx_->apply(static_cast<gridworld::Action>(a));
    t_ = 0;
    view_ = gridworld::observe(ctx_->world());
  }

  const gridworld::SymbolicView& view() const override { return view_; }
  const std::string& text() const override { return text_; }

  rl::EnvStep step(int action) override {
    ctx_->apply(static_cast<gridworld::Action>(action));
    ++t_;
    view_ = gridworld::observe(ctx_->world());
    rl::EnvStep out;
    if (checkdsl::eval_check(check_, ctx_->last_snapshot())) {
      out.done = true;
      out.success = true;
      out.reward = gridworld::env_reward(true, t_, horizon_);
    } else if (t_ >= horizon_) {
      out.done = true;
    }
    return out;
  }

 private:
  const gridworld::WorldState& initial_;
  const std::vector<int>* prefix_;
  checkdsl::ExprPtr check_;
  std::string text_;
  int horizon_;
  std::optional<perception::EpisodeContext> ctx_;
  gridworld::SymbolicView view_;
  int t_ = 0;
};

struct SubgoalRun {
  bool success = false;
  long frames = 0;
  std::vector<int> actions;
};

// Trains a fresh throwaway policy for one subgoal and returns the first
// successful action sequence (if any) within `budget` frames.
SubgoalRun train_subgoal(const gridworld::WorldState& initial, const std::vector<int>& prefix,
                         const SubgoalSpec& sg, int horizon, long budget, uint64_t seed) {
  rl::PPOConfig cfg = rl::verification_config(seed);
  cfg.horizon = horizon;
  cfg.max_frames = budget;
  rl::ActorCriticNet<float> net{rl::NetConfig{}};
  net.init_params(hash64("verify-net-init", seed));
  const std::string text = condition_text(sg.params);
  rl::EnvFactory factory = [&](int) {
    return std::make_unique<SubgoalEnv>(initial, &prefix, sg.check, text, horizon);
  };
  rl::TrainReport report = rl::train_policy(factory, cfg, net, /*stop_on_first_success=*/true);
  return {report.found_success, report.total_frames, report.success_actions};
}

json record_to_json(const SubgoalRecord& r) {
  return json{{"index", r.index},
              {"description", r.description},
              {"api", r.api},
              {"params", r.params},
              {"check_text", r.check_text},
              {"restore_actions", r.restore_actions},
              {"frames_spent", r.frames_spent}};
}

SubgoalRecord record_from_json(const json& j) {
  SubgoalRecord r;
  r.index = j.at("index").get<int>();
  r.description = j.at("description").get<std::string>();
  r.api = j.at("api").get<std::string>();
  r.params = j.at("params").get<std::vector<std::string>>();
  r.check_text = j.at("check_text").get<std::string>();
  r.restore_actions = j.at("restore_actions").get<std::vector<int>>();
  r.frames_spent = j.at("frames_spent").get<long>();
  checkdsl::parse_check(r.check_text);  // reject corrupt checks at load time
  return r;
}

}  // namespace

std::string condition_text(const std::vector<std::string>& params) {
  std::string out;
  for (const std::string& p : params) {
    if (!out.empty()) out += " ";
    out += p;
  }
  return out;
}

Hypothesis hypothesize(const gridworld::InstructionTask& task, planner::Planner& planner) {
  try {
    const planner::Decomposition decomp = planner.decompose(task.text);
    if (decomp.subgoals.empty()) throw HypothesisFailed("decomposition has no subgoals");
    Hypothesis hyp;
    hyp.instruction = task.text;
    for (const planner::Subgoal& sg : decomp.subgoals) {
      SubgoalSpec spec;
      spec.description = sg.description;
      spec.check_text = sg.check_source;
      spec.check = checkdsl::parse_check(sg.check_source);
      const planner::ApiTranslation api = planner.translate_api(sg.description);
      spec.api = api.api;
      spec.params = api.params;
      spec.repeatable = sg.repeatable;
      hyp.subgoals.push_back(std::move(spec));
    }
    return hyp;
  } catch (const HypothesisFailed&) {
    throw;
  } catch (const Error& e) {
    throw HypothesisFailed(e.what());
  }
}

GroundingExperience verify(const gridworld::InstructionTask& task, const Hypothesis& hyp,
                           const VerificationBudget& budget, uint64_t train_seed) {
  const auto [gen_task, initial] = gridworld::generate_task(task.level, task.seed);
  (void)gen_task;

  GroundingExperience exp;
  exp.instruction = task.text;
  exp.level = std::string(gridworld::level_name(task.level.level));
  exp.world_seed = task.seed;

  std::vector<int> prefix;  // all recorded actions so far
  long frames_used = 0;
  int run_counter = 0;
  bool all_recorded = true;

  auto remaining = [&]() { return budget.t_verify - frames_used; };
  auto seed_for_run = [&]() {
    return hash64("verify-run-" + std::to_string(run_counter++), train_seed);
  };
  auto add_record = [&](int index, const SubgoalSpec& sg, std::vector<int> actions, long frames) {
    SubgoalRecord r;
    r.index = index;
    r.description = sg.description;
    r.api = sg.api;
    r.params = sg.params;
    r.check_text = sg.check_text;
    r.restore_actions = std::move(actions);
    r.frames_spent = frames;
    prefix.insert(prefix.end(), r.restore_actions.begin(), r.restore_actions.end());
    exp.subgoals.push_back(std::move(r));
  };
  // Check evaluated on the current prefix end state, zero frames spent.
  auto holds_now = [&](const SubgoalSpec& sg) {
    perception::EpisodeContext ctx(initial);
    for (int a : prefix) ctx.apply(static_cast<gridworld::Action>(a));
    return checkdsl::eval_check(sg.check, ctx.last_snapshot());
  };
  auto train_one = [&](const SubgoalSpec& sg, long frame_budget) {
    SubgoalRun run = train_subgoal(initial, prefix, sg, budget.per_subgoal_horizon, frame_budget,
                                   seed_for_run());
    frames_used += run.frames;
    return run;
  };

  const int n = static_cast<int>(hyp.subgoals.size());
  for (int i = 0; i < n; ++i) {
    const SubgoalSpec& sg = hyp.subgoals[static_cast<std::size_t>(i)];
    if (holds_now(sg)) {
      // Already satisfied at the prefix end: the successful sequence is empty.
      add_record(i, sg, {}, 0);
      continue;
    }
    if (remaining() <= 0) {
      all_recorded = false;
      break;
    }
    SubgoalRun run = train_one(sg, remaining());
    if (!run.success) {
      all_recorded = false;
      break;
    }
    add_record(i, sg, std::move(run.actions), run.frames);
  }

  exp.total_frames = frames_used;
  if (!all_recorded || frames_used > budget.t_verify) {
    exp.verified = false;
    return exp;
  }

  // Final consistency replay: the concatenated restore actions must drive the
  // task judge to success on a fresh world.
  gridworld::WorldState w = initial;
  gridworld::TaskJudge judge(task.goal);
  for (int a : prefix) {
    gridworld::apply(w, static_cast<gridworld::Action>(a));
    judge.on_step(w);
  }
  exp.verified = judge.succeeded();
  return exp;
}

gridworld::WorldState replay_restore(gridworld::Level level, uint64_t world_seed,
                                     const std::vector<std::vector<int>>& action_seqs) {
  auto [task, w] = gridworld::generate_task(level, world_seed);
  (void)task;
  for (const auto& seq : action_seqs)
    for (int a : seq) gridworld::apply(w, static_cast<gridworld::Action>(a));
  return w;
}

void store_hypotheses(const std::string& path, const std::vector<HypothesisRecord>& xs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const HypothesisRecord& x : xs) {
    json j{{"level", gridworld::level_name(x.level)},
           {"world_seed", x.world_seed},
           {"instruction", x.hypothesis.instruction}};
    j["subgoals"] = json::array();
    for (const SubgoalSpec& s : x.hypothesis.subgoals)
      j["subgoals"].push_back(json{{"description", s.description},
                                   {"check", s.check_text},
                                   {"api", s.api},
                                   {"params", s.params},
                                   {"repeatable", s.repeatable}});
    out << j.dump() << "\n";
  }
}

std::vector<HypothesisRecord> load_hypotheses(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<HypothesisRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      HypothesisRecord x;
      const auto level = gridworld::level_from_name(j.at("level").get<std::string>());
      if (!level) throw Error("unknown level " + j.at("level").get<std::string>());
      x.level = *level;
      x.world_seed = j.at("world_seed").get<uint64_t>();
      x.hypothesis.instruction = j.at("instruction").get<std::string>();
      for (const json& s : j.at("subgoals")) {
        SubgoalSpec spec;
        spec.description = s.at("description").get<std::string>();
        spec.check_text = s.at("check").get<std::string>();
        spec.check = checkdsl::parse_check(spec.check_text);
        spec.api = s.at("api").get<std::string>();
        spec.params = s.at("params").get<std::vector<std::string>>();
        spec.repeatable = s.at("repeatable").get<bool>();
        x.hypothesis.subgoals.push_back(std::move(spec));
      }
      out.push_back(std::move(x));
    } catch (const std::exception& e) {
      throw IoError("bad hypothesis at " + path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void store_experiences(const std::string& path, const std::vector<GroundingExperience>& xs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const GroundingExperience& x : xs) {
    json j{{"instruction", x.instruction}, {"level", x.level},
           {"world_seed", x.world_seed},   {"verified", x.verified},
           {"total_frames", x.total_frames}};
    j["subgoals"] = json::array();
    for (const SubgoalRecord& r : x.subgoals) j["subgoals"].push_back(record_to_json(r));
    out << j.dump() << "\n";
  }
}

std::vector<GroundingExperience> load_experiences(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<GroundingExperience> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      GroundingExperience x;
      x.instruction = j.at("instruction").get<std::string>();
      x.level = j.at("level").get<std::string>();
      x.world_seed = j.at("world_seed").get<uint64_t>();
      x.verified = j.at("verified").get<bool>();
      x.total_frames = j.at("total_frames").get<long>();
      for (const json& r : j.at("subgoals")) x.subgoals.push_back(record_from_json(r));
      out.push_back(std::move(x));
    } catch (const std::exception& e) {
      throw IoError("bad experience at " + path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sdg::grounding
