#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdg/common/errors.hpp"
#include "sdg/gridworld/types.hpp"

namespace sdg::gridworld {

enum class Level { GoToLocal = 0, PickupLoc, PutNextLocal, Open, SynthSeq, BossLevel };
enum class MapKind { SingleRoom, Rooms3x3 };

struct LevelSpec {
  Level level = Level::GoToLocal;
  MapKind map = MapKind::SingleRoom;
  int distractor_count = 7;
};

LevelSpec default_level_spec(Level level);
std::string_view level_name(Level level);
std::optional<Level> level_from_name(std::string_view name);

enum class AtomKind { GoTo, Pickup, PutNext, Open };
enum class LocQualifier { Left, Right, Front, Behind };

struct ObjDesc {
  CellKind kind = CellKind::Ball;  // CellKind::Door for Open atoms
  Color color = Color::Red;
  bool operator==(const ObjDesc&) const = default;
};

// One goal atom. Atoms with equal rank may be completed in any order; a larger
// rank becomes eligible only once every earlier rank has completed. Matching
// is existential over (color, kind); the qualifier is surface text only, the
// referenced object is resolved when the task is generated.
struct GoalAtom {
  AtomKind kind = AtomKind::GoTo;
  ObjDesc a;
  ObjDesc b;  // PutNext target
  int rank = 0;
  std::optional<LocQualifier> qualifier;
};

struct GoalPredicate {
  std::vector<GoalAtom> atoms;
};

struct InstructionTask {
  std::string text;
  LevelSpec level;
  GoalPredicate goal;
  uint64_t seed = 0;
};

struct UnparsableInstruction : Error {
  using Error::Error;
};

bool atom_satisfied(const WorldState& w, const GoalAtom& atom);

// Tracks completion order across a trajectory: an atom is recorded the first
// time it holds while eligible, and stays recorded afterwards.
class TaskJudge {
 public:
  TaskJudge() = default;
  explicit TaskJudge(const GoalPredicate& goal);
  void on_step(const WorldState& w);
  bool succeeded() const;
  uint64_t mask() const { return mask_; }
  void restore_mask(uint64_t m) { mask_ = m; }

 private:
  GoalPredicate goal_;
  uint64_t mask_ = 0;
};

// Single-state convenience: feeds `w` to a fresh judge once.
bool task_success(const WorldState& w, const InstructionTask& task);

double env_reward(bool success, int steps, int horizon);

// Deterministic task/world generation: byte-identical output for identical
// (spec, seed). Throws Error if no satisfiable placement is found.
std::pair<InstructionTask, WorldState> generate_task(const LevelSpec& spec, uint64_t seed);
std::pair<InstructionTask, WorldState> generate_task(Level level, uint64_t seed);

// Text grammar shared with the scripted planner.
GoalPredicate parse_instruction(const std::string& text);
std::string instruction_text(const GoalPredicate& goal, uint64_t surface_seed);
std::string atom_object_phrase(const ObjDesc& d);  // "red ball" / "green door"

}  // namespace sdg::gridworld
