#pragma once

#include <string>

namespace sdg::planner {

// Chat prompt assets for the HTTP planner. The defaults are compiled in and
// versioned; load_prompts overlays any matching UTF-8 files found in a
// directory (one file per field, named "<field>.txt").
struct PromptSet {
  std::string version;
  std::string role_decompose;
  std::string task_definitions;
  std::string perception_api;
  std::string output_format_decompose;
  std::string few_shot_decompose;
  std::string role_generate;
  std::string output_format_generate;
  std::string few_shot_generate;
  std::string role_debug;
  std::string output_format_debug;
  std::string debugging_suggestions;
};

PromptSet default_prompts();

// Overrides fields from "<dir>/<field>.txt" when present; missing files keep
// the compiled-in default. Appends "+local" to version if anything changed.
PromptSet load_prompts(const std::string& dir);

// Message assembly for the three chat roles.
std::string decompose_system_prompt(const PromptSet& p);
std::string decompose_user_prompt(const std::string& instruction);
std::string translate_system_prompt(const PromptSet& p);
std::string translate_user_prompt(const std::string& subgoal_description);
std::string generate_system_prompt(const PromptSet& p, const std::string& skill_api_docs);
std::string generate_user_prompt(const std::string& instruction);
std::string debug_system_prompt(const PromptSet& p, const std::string& skill_api_docs);
std::string debug_user_prompt(const std::string& instruction, const std::string& program_text,
                              const std::string& error_message);

}  // namespace sdg::planner
