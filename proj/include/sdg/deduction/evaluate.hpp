#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "sdg/deduction/solve.hpp"

namespace sdg::deduction {

struct EvalConfig {
  gridworld::Level level = gridworld::Level::GoToLocal;
  int instructions = 100;  // distinct generated tasks
  int repeats = 3;         // independent trials per task
  int debug_rounds = 3;
  int attempts = 5;
  bool greedy = false;
  uint64_t seed = 1;           // base for world/trial seed streams
  std::string skill_api_docs;  // derived from the registry when empty
};

struct EvalTrial {
  int instruction_index = 0;
  int repeat = 0;
  uint64_t world_seed = 0;
  std::string instruction;
  bool success = false;
  int rounds_used = 0;
  long steps = 0;
  std::string error;  // last round's failure, empty on success
};

struct EvalReport {
  std::string level;
  int instructions = 0;
  int repeats = 0;
  int debug_rounds = 0;
  int attempts = 0;
  uint64_t seed = 0;
  int successes = 0;
  double success_rate = 0.0;  // percent of instructions x repeats
  std::vector<EvalTrial> trials;
};

using EvalProgress = std::function<void(const EvalTrial&)>;

// Solves `instructions` generated tasks `repeats` times each. World seeds come
// from a stream salted with the level name, disjoint from the training and
// verification streams; each trial gets its own solve RNG base so repeats are
// independent. Identical config (apart from attempts/debug_rounds) keeps trial
// seeds aligned, which is what makes budget sweeps comparable row by row.
EvalReport evaluate(const induction::SkillRegistry& registry, planner::Planner& planner,
                    const EvalConfig& cfg, const EvalProgress& progress = nullptr);

void write_eval_csv(const EvalReport& report, const std::filesystem::path& path);
void write_eval_json(const EvalReport& report, const std::filesystem::path& path);
EvalReport load_eval_json(const std::filesystem::path& path);

}  // namespace sdg::deduction
