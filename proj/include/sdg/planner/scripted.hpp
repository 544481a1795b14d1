#pragma once

#include "sdg/planner/planner.hpp"

namespace sdg::planner {

// Deterministic planner: template-based decomposition over the six-level
// instruction grammar, keyword API translation, trigram embeddings, template
// program generation, and rule-based program debugging.
class ScriptedPlanner : public Planner {
 public:
  Decomposition decompose(const std::string& instruction) override;
  ApiTranslation translate_api(const std::string& subgoal_description) override;
  EmbeddingVector embed(const std::string& text) override;
  std::string generate_program(const std::string& instruction,
                               const std::string& skill_api_docs) override;
  std::string debug_program(const std::string& instruction, const std::string& program_text,
                            const std::string& error_message) override;
};

std::unique_ptr<Planner> make_scripted_planner();

}  // namespace sdg::planner
