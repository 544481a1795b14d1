#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdg/gridworld/instruction.hpp"

namespace sdg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitMissingInput = 2;
inline constexpr int kExitInternal = 3;

// Flat run configuration. Every field is one --flag and one `key=value` line
// in the optional --config file; precedence is flag > file > default.
struct RunConfig {
  std::string command;
  std::vector<gridworld::Level> levels;  // resolved from `levels_csv`
  std::string levels_csv = "all";
  std::string out_dir = "out";
  std::string backend = "scripted";  // scripted | http

  uint64_t seed = 1;
  int workers = 8;  // vectorized rollout slots per training run

  int instructions = 50;  // hypothesize: generated tasks per level
  long t_verify = 3000;   // verify: training-frame budget per instruction

  int k_min = 2;  // induce: CH-score search range
  int k_max = 16;
  long skill_frames = 1000000;  // induce: PPO frames per skill
  std::string restore = "on";   // induce: off = no prefix replay (ablation)

  int eval_instructions = 100;
  int eval_repeats = 3;
  int debug_rounds = 3;  // D
  int attempts = 5;      // A
  bool sweep_d = false;  // eval: D in {0,1,3} at A=5
  bool sweep_a = false;  // eval: A in {1,2,5} at D=0

  std::string http_endpoint = "https://api.openai.com";
  std::string http_model = "gpt-4";
  std::string http_embedding_model = "text-embedding-ada-002";
  std::string http_key_env = "SDG_LLM_API_KEY";
  std::string http_prompt_dir;
  std::string http_transcript;
  int http_timeout = 60;
  int http_retries = 3;
};

// Parses argv[1:], runs one command (hypothesize | verify | induce | eval |
// plot-data), and returns the process exit code: 0 success, 1 config error,
// 2 missing input, 3 internal error.
int run_cli(const std::vector<std::string>& args);

}  // namespace sdg::cli
