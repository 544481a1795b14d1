#pragma once

#include <optional>
#include <string>

#include "sdg/planner/planner.hpp"

namespace sdg::planner {

// Parses a chat-model reply into a Decomposition. Subgoals are introduced by
// "Goal N:" or "(N)" lines; each needs a check, either a "check: <condition>"
// line in the condition DSL or a code block written against the perception
// API, whose recognizable patterns (observation membership, adjacency sums,
// carried equality, door status, visited-room scans) are mapped to condition
// atoms. Goals whose description merely says to repeat earlier goals may omit
// the check and are dropped. Throws FormatError when nothing valid remains or
// any present check fails to parse.
Decomposition extract_decomposition(const std::string& instruction, const std::string& content);

// Maps one perception-API code snippet to a condition expression, or nullopt
// when no known pattern matches.
std::optional<std::string> translate_check_code(const std::string& code);

// Pulls the program out of a reply: the first fenced code block, else the
// text from the first program keyword onward. Validates by parsing; throws
// FormatError when extraction or the parse fails.
std::string extract_program_text(const std::string& content);

// Parses a single-line API call reply, e.g. `discover_object("green box")`.
// Validates the name against the closed skill vocabulary.
ApiTranslation extract_api_call(const std::string& content);

}  // namespace sdg::planner
