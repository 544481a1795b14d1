#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sdg/common/errors.hpp"

namespace sdg::planner {

// One decomposed subgoal: a "Goal N: ..." description plus the check-DSL
// source of its completion test. Explore helpers ([find unexplored door;
// enter unexplored room]) are marked repeatable; the grounding phase treats a
// maximal run of consecutive repeatable subgoals as one bounded retry group.
struct Subgoal {
  std::string description;
  std::string check_source;
  bool repeatable = false;
};

struct Decomposition {
  std::string instruction;
  std::vector<Subgoal> subgoals;
};

struct ApiTranslation {
  std::string api;
  std::vector<std::string> params;  // 0, 1 or 2 entries
};

struct EmbeddingVector {
  std::vector<double> values;
  std::string provider;  // "scripted" | "http"
};

struct EmptyProgram : Error {
  using Error::Error;
};
struct NoFixAvailable : Error {
  using Error::Error;
};
struct TransportError : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};

// The four language-model roles behind one interface. The scripted backend is
// a pure function of its inputs; the HTTP backend speaks an OpenAI-compatible
// chat-completions protocol.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual Decomposition decompose(const std::string& instruction) = 0;
  virtual ApiTranslation translate_api(const std::string& subgoal_description) = 0;
  virtual EmbeddingVector embed(const std::string& text) = 0;
  virtual std::string generate_program(const std::string& instruction,
                                       const std::string& skill_api_docs) = 0;
  virtual std::string debug_program(const std::string& instruction, const std::string& program_text,
                                    const std::string& error_message) = 0;
};

}  // namespace sdg::planner
