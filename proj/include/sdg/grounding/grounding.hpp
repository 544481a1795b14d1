#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdg/checkdsl/checkdsl.hpp"
#include "sdg/common/errors.hpp"
#include "sdg/gridworld/instruction.hpp"
#include "sdg/planner/planner.hpp"

namespace sdg::grounding {

struct HypothesisFailed : Error {
  using Error::Error;
};

// A decomposition subgoal with its check parsed and API translation attached.
struct SubgoalSpec {
  std::string description;
  std::string check_text;
  checkdsl::ExprPtr check;
  std::string api;
  std::vector<std::string> params;
  bool repeatable = false;
};

struct Hypothesis {
  std::string instruction;
  std::vector<SubgoalSpec> subgoals;
};

// Conditioning text fed to subgoal/skill policies: the joined parameter text
// (e.g. "red ball"; empty for parameterless verbs). The same string is used
// when training a policy and when invoking it later, so the policy always
// sees the tokens it was trained on; the verb itself is identified by which
// policy is invoked, not by the text.
std::string condition_text(const std::vector<std::string>& params);

// Runs planner.decompose and validates every subgoal (check parses, API
// translates). Any planner or parse failure surfaces as HypothesisFailed.
Hypothesis hypothesize(const gridworld::InstructionTask& task, planner::Planner& planner);

// File handoff between the hypothesize and verify phases: one decomposed
// instruction per line with the world it was generated from.
struct HypothesisRecord {
  gridworld::Level level = gridworld::Level::GoToLocal;
  uint64_t world_seed = 0;
  Hypothesis hypothesis;
};

void store_hypotheses(const std::string& path, const std::vector<HypothesisRecord>& xs);
std::vector<HypothesisRecord> load_hypotheses(const std::string& path);

struct VerificationBudget {
  long t_verify = 3000;     // shared training-frame budget per instruction
  int per_subgoal_horizon = 30;
};

// One realized subgoal: `index` refers back to the decomposition (repeatable
// subgoals may appear more than once, in execution order). restore_actions
// replayed from the previous record's end state satisfy the check.
struct SubgoalRecord {
  int index = 0;
  std::string description;
  std::string api;
  std::vector<std::string> params;
  std::string check_text;
  std::vector<int> restore_actions;
  long frames_spent = 0;
};

struct GroundingExperience {
  std::string instruction;
  std::string level;
  uint64_t world_seed = 0;
  bool verified = false;
  long total_frames = 0;
  std::vector<SubgoalRecord> subgoals;
};

// Verification: per subgoal, restore the prefix, train a throwaway policy on
// the bool check reward, and keep the first successful action sequence.
// Consecutive repeatable subgoals form an explore group that is retried (at
// most 9 times) until the following subgoal's check can be reached. Running
// out of the shared budget yields verified=false with partial records; a
// fully-recorded experience is then replayed from a fresh world and verified
// is set to the task judge's verdict.
GroundingExperience verify(const gridworld::InstructionTask& task, const Hypothesis& hyp,
                           const VerificationBudget& budget, uint64_t train_seed);

// Deterministic replay of recorded action sequences from the generated world.
gridworld::WorldState replay_restore(gridworld::Level level, uint64_t world_seed,
                                     const std::vector<std::vector<int>>& action_seqs);

// JSONL persistence, one experience per line; checks stored as DSL text.
void store_experiences(const std::string& path, const std::vector<GroundingExperience>& xs);
std::vector<GroundingExperience> load_experiences(const std::string& path);

}  // namespace sdg::grounding
