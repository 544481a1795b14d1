#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdg/deduction/program.hpp"
#include "sdg/induction/registry.hpp"
#include "sdg/perception/perception.hpp"

namespace sdg::deduction {

enum class ExecErrorKind { IllegalAction, SkillFailed, UnknownSkill, LoopExhausted, UserFail };

struct ExecError {
  ExecErrorKind kind = ExecErrorKind::SkillFailed;
  std::string message;        // formatted, ends with "at statement <path>"
  std::vector<int> location;  // statement index path
};

const char* exec_error_kind_name(ExecErrorKind kind);

struct SkillRuntimeConfig {
  int attempts = 5;       // budget A for mandatory calls (outside While bodies)
  int loop_attempts = 3;  // fixed budget inside While bodies (the loop retries)
  int horizon = 15;       // steps per attempt
  bool greedy = false;    // argmax instead of sampled actions
  uint64_t trial_seed = 0;
};

struct RunResult {
  bool ok = true;
  std::optional<ExecError> error;
  long steps = 0;  // primitive actions taken
};

// Observer invoked after every primitive action with the new world state
// (drives the task judge during evaluation).
using StepObserver = std::function<void(const gridworld::WorldState&)>;

// Executes a program against the world in `ctx`. Statements run in order;
// While re-checks its guard each iteration and tolerates environment-level
// failures (skill_failed / illegal_action / nested loop_exhausted) inside its
// body, since the loop itself is the retry mechanism; the same failures are
// fatal at top level. Skill calls retry up to `attempts` times (fixed
// loop_attempts inside While bodies), each invocation on its own RNG stream
// keyed by (trial_seed, invocation ordinal) so the attempt budget never
// shifts downstream randomness.
RunResult run_program(const Program& p, perception::EpisodeContext& ctx,
                      const induction::SkillRegistry& registry, const SkillRuntimeConfig& cfg,
                      const StepObserver& on_step = nullptr);

struct InvokeResult {
  bool success = false;
  int steps = 0;
};

// One skill invocation: short-circuits at zero steps when the post-condition
// (canonical check of name/params) already holds, else runs the policy for up
// to `attempts` episodes of `horizon` steps, continuing from the current
// world. Throws Error for names outside the registry/vocabulary.
InvokeResult invoke_skill(const std::string& name, const std::vector<std::string>& params,
                          perception::EpisodeContext& ctx,
                          const induction::SkillRegistry& registry, int attempts,
                          const SkillRuntimeConfig& cfg, Rng& rng,
                          const StepObserver& on_step = nullptr);

}  // namespace sdg::deduction
