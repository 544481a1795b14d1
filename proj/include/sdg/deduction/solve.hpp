#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdg/deduction/runtime.hpp"
#include "sdg/gridworld/instruction.hpp"
#include "sdg/induction/registry.hpp"
#include "sdg/planner/planner.hpp"

namespace sdg::deduction {

struct SolveConfig {
  int debug_rounds = 3;  // D: repair rounds after the first execution
  int attempts = 5;      // A: attempt budget per mandatory skill call
  int loop_attempts = 3;
  int horizon = 15;
  bool greedy = false;
  uint64_t trial_seed = 0;
  std::string skill_api_docs;  // forwarded to the program generator
};

struct RoundRecord {
  int round = 0;
  std::string program_text;
  bool ran = false;  // false when the round's text did not even parse
  bool success = false;
  long steps = 0;
  std::string error;  // execution (or synthesized) failure, kept even if a later round fixes it
};

struct SolveResult {
  bool success = false;
  int rounds_used = 0;
  long total_steps = 0;
  std::string planner_error;  // fatal failure before any round could run
  std::vector<RoundRecord> rounds;
};

// Runs up to 1 + debug_rounds executions of the generated program, each on a
// fresh world rebuilt from the task seed and its own RNG stream keyed by
// (trial_seed, round). A failed round's error message goes back through the
// planner's debugger; NoFixAvailable (or any other planner failure) retries
// the same program. Success is judged over the whole trajectory, so clauses
// that stop holding by the end still count once satisfied in rank order.
SolveResult solve(const gridworld::InstructionTask& task, const induction::SkillRegistry& registry,
                  planner::Planner& planner, const SolveConfig& cfg);

// Signature/post-condition list for the trained skills, for program-generation
// prompts. Only apis present in the registry are listed.
std::string skill_api_docs(const induction::SkillRegistry& registry);

}  // namespace sdg::deduction
