#pragma once

#include <optional>
#include <vector>

#include "sdg/gridworld/instruction.hpp"

namespace sdg::support {

// Full-observability constructive solver used as a test oracle. Navigation is
// BFS over (x, y, dir); closed doors on the path are toggled open as they are
// reached. Returns nullopt when the atom cannot be achieved. An already
// satisfied atom yields an empty plan.
std::optional<std::vector<gridworld::Action>> solve_atom(const gridworld::WorldState& w,
                                                         const gridworld::GoalAtom& atom);

// Solves the atoms in rank order against a scratch copy of the world. Atoms
// that start out satisfied contribute a turn-left/turn-right pair so a replay
// through TaskJudge observes them post-step.
std::optional<std::vector<gridworld::Action>> solve_task(const gridworld::WorldState& w,
                                                         const gridworld::InstructionTask& task);

}  // namespace sdg::support
