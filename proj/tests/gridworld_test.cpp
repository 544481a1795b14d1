#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdg/common/rng.hpp"
#include "sdg/gridworld/instruction.hpp"
#include "sdg/gridworld/types.hpp"
#include "support/oracle_solver.hpp"

using namespace sdg::gridworld;
using sdg::Rng;

namespace {

const Level kLevels[] = {Level::GoToLocal,  Level::PickupLoc, Level::PutNextLocal,
                         Level::Open,       Level::SynthSeq,  Level::BossLevel};

// Multiset of every movable object plus the carried slot; walls, floors and
// doors are tallied separately. Conserved by every action.
std::map<std::string, int> entity_census(const WorldState& w) {
  std::map<std::string, int> n;
  for (int y = 0; y < w.height; ++y)
    for (int x = 0; x < w.width; ++x) {
      const Cell& c = w.at(x, y);
      switch (c.kind) {
        case CellKind::Ball:
        case CellKind::Box:
        case CellKind::Key:
          ++n[object_name(c.kind, c.color)];
          break;
        case CellKind::Door:
          ++n[door_name(c.color)];
          break;
        case CellKind::Wall:
          ++n["wall"];
          break;
        default:
          break;
      }
    }
  if (w.carried) ++n[object_name(w.carried->kind, w.carried->color)];
  return n;
}

WorldState empty_room(int side) {
  WorldState w;
  w.width = side;
  w.height = side;
  w.grid.assign(static_cast<size_t>(side * side), Cell{CellKind::Floor, Color::None, DoorState::None});
  w.room_map.assign(static_cast<size_t>(side * side), 0);
  for (int i = 0; i < side; ++i) {
    w.at(i, 0) = {CellKind::Wall, Color::None, DoorState::None};
    w.at(i, side - 1) = {CellKind::Wall, Color::None, DoorState::None};
    w.at(0, i) = {CellKind::Wall, Color::None, DoorState::None};
    w.at(side - 1, i) = {CellKind::Wall, Color::None, DoorState::None};
  }
  w.agent_pos = {side / 2, side / 2};
  w.agent_dir = Dir::North;
  return w;
}

}  // namespace

TEST_CASE("action semantics on a hand-built room") {
  WorldState w = empty_room(7);
  w.agent_pos = {3, 3};
  w.agent_dir = Dir::North;
  w.at(3, 2) = {CellKind::Ball, Color::Red, DoorState::None};

  SUBCASE("turns rotate in place") {
    CHECK(apply(w, Action::TurnLeft).legal);
    CHECK(w.agent_dir == Dir::West);
    CHECK(apply(w, Action::TurnRight).legal);
    CHECK(apply(w, Action::TurnRight).legal);
    CHECK(w.agent_dir == Dir::East);
    CHECK(w.agent_pos == Pos{3, 3});
  }

  SUBCASE("move into an object is Blocked") {
    const ActionOutcome out = apply(w, Action::MoveForward);
    CHECK(!out.legal);
    CHECK(out.reason == ActionReason::Blocked);
    CHECK(w.agent_pos == Pos{3, 3});
  }

  SUBCASE("move onto floor advances") {
    w.agent_dir = Dir::South;
    CHECK(apply(w, Action::MoveForward).legal);
    CHECK(w.agent_pos == Pos{3, 4});
  }

  SUBCASE("pick lifts the facing object; the cell becomes floor") {
    CHECK(apply(w, Action::Pick).legal);
    REQUIRE(w.carried.has_value());
    CHECK(w.carried->kind == CellKind::Ball);
    CHECK(w.carried->color == Color::Red);
    CHECK(w.at(3, 2).kind == CellKind::Floor);

    SUBCASE("second pick fails with HandsFull") {
      w.at(3, 2) = {CellKind::Key, Color::Blue, DoorState::None};
      const ActionOutcome out = apply(w, Action::Pick);
      CHECK(!out.legal);
      CHECK(out.reason == ActionReason::HandsFull);
    }
    SUBCASE("put returns it to the facing floor cell") {
      CHECK(apply(w, Action::Put).legal);
      CHECK(!w.carried.has_value());
      CHECK(w.at(3, 2).kind == CellKind::Ball);
    }
    SUBCASE("put onto an occupied cell fails") {
      w.at(3, 2) = {CellKind::Key, Color::Blue, DoorState::None};
      const ActionOutcome out = apply(w, Action::Put);
      CHECK(!out.legal);
      CHECK(out.reason == ActionReason::DropOccupied);
    }
  }

  SUBCASE("pick with nothing ahead fails") {
    w.agent_dir = Dir::East;
    const ActionOutcome out = apply(w, Action::Pick);
    CHECK(!out.legal);
    CHECK(out.reason == ActionReason::NothingToPick);
  }

  SUBCASE("put with empty hands fails") {
    const ActionOutcome out = apply(w, Action::Put);
    CHECK(!out.legal);
    CHECK(out.reason == ActionReason::NothingCarried);
  }

  SUBCASE("toggle needs a door ahead") {
    const ActionOutcome out = apply(w, Action::Toggle);
    CHECK(!out.legal);
    CHECK(out.reason == ActionReason::NoDoorAhead);
  }

  SUBCASE("toggle flips a door and movement respects its state") {
    w.at(3, 2) = {CellKind::Door, Color::Green, DoorState::Closed};
    CHECK(!apply(w, Action::MoveForward).legal);
    CHECK(apply(w, Action::Toggle).legal);
    CHECK(w.at(3, 2).door == DoorState::Open);
    CHECK(apply(w, Action::MoveForward).legal);
    CHECK(w.agent_pos == Pos{3, 2});
    w.agent_pos = {3, 3};
    CHECK(apply(w, Action::Toggle).legal);
    CHECK(w.at(3, 2).door == DoorState::Closed);
  }
}

TEST_CASE("generation is deterministic and replays bit-identically") {
  Rng rng(42);
  int replays = 0;
  while (replays < 100) {
    const Level level = kLevels[rng.uniform_int(0, 5)];
    const uint64_t seed = rng.next_u64();
    auto [task1, w1] = generate_task(level, seed);
    auto [task2, w2] = generate_task(level, seed);
    REQUIRE(task1.text == task2.text);
    REQUIRE(w1.hash() == w2.hash());

    std::vector<Action> actions;
    for (int t = 0; t < 200; ++t) actions.push_back(static_cast<Action>(rng.uniform_int(0, 5)));

    const auto census0 = entity_census(w1);
    std::vector<uint64_t> hashes1, hashes2;
    for (Action a : actions) {
      apply(w1, a);
      hashes1.push_back(w1.hash());
      CHECK(entity_census(w1) == census0);
    }
    for (Action a : actions) {
      apply(w2, a);
      hashes2.push_back(w2.hash());
    }
    REQUIRE(hashes1 == hashes2);
    ++replays;
  }
}

TEST_CASE("generated worlds satisfy the level recipe") {
  Rng rng(7);
  for (const Level level : kLevels) {
    const LevelSpec spec = default_level_spec(level);
    for (int i = 0; i < 5; ++i) {
      auto [task, w] = generate_task(level, rng.next_u64());
      CHECK(task.level.level == level);
      CHECK(!task.text.empty());
      CHECK(!w.carried.has_value());
      CHECK(w.steps_taken == 0);

      // Every atom's referenced objects exist somewhere on the map.
      for (const GoalAtom& atom : task.goal.atoms) {
        auto present = [&](const ObjDesc& d) {
          for (int y = 0; y < w.height; ++y)
            for (int x = 0; x < w.width; ++x) {
              const Cell& c = w.at(x, y);
              if (c.kind == d.kind && c.color == d.color) return true;
            }
          return false;
        };
        CHECK(present(atom.a));
        if (atom.kind == AtomKind::PutNext) CHECK(present(atom.b));
      }

      // Single-room maps have no doors; 3x3 maps have rooms beyond room 0.
      bool has_door = false;
      int16_t max_room = 0;
      for (int y = 0; y < w.height; ++y)
        for (int x = 0; x < w.width; ++x) {
          has_door |= w.at(x, y).kind == CellKind::Door;
          max_room = std::max(max_room, w.room_map[static_cast<size_t>(y) * w.width + x]);
        }
      if (spec.map == MapKind::SingleRoom) {
        CHECK(!has_door);
        CHECK(max_room == 0);
      } else {
        CHECK(has_door);
        CHECK(max_room == 8);
      }
    }
  }
}

TEST_CASE("instruction text round-trips through the grammar") {
  Rng rng(11);
  for (const Level level : kLevels)
    for (int i = 0; i < 20; ++i) {
      auto [task, w] = generate_task(level, rng.next_u64());
      const GoalPredicate parsed = parse_instruction(task.text);
      REQUIRE(parsed.atoms.size() == task.goal.atoms.size());
      for (size_t k = 0; k < parsed.atoms.size(); ++k) {
        CHECK(parsed.atoms[k].kind == task.goal.atoms[k].kind);
        CHECK(parsed.atoms[k].a == task.goal.atoms[k].a);
        CHECK(parsed.atoms[k].b == task.goal.atoms[k].b);
        CHECK(parsed.atoms[k].rank == task.goal.atoms[k].rank);
      }
    }
  CHECK_THROWS_AS(parse_instruction(""), UnparsableInstruction);
  CHECK_THROWS_AS(parse_instruction("fly to the moon"), UnparsableInstruction);
}

TEST_CASE("oracle plans solve every level and the judge agrees") {
  Rng rng(5);
  for (const Level level : kLevels)
    for (int i = 0; i < 10; ++i) {
      auto [task, w] = generate_task(level, rng.next_u64());
      const auto plan = sdg::support::solve_task(w, task);
      REQUIRE_MESSAGE(plan.has_value(), "level ", level_name(level), " seed ", task.seed);
      TaskJudge judge(task.goal);
      for (const Action a : *plan) {
        apply(w, a);
        judge.on_step(w);
      }
      CHECK_MESSAGE(judge.succeeded(), "level ", level_name(level), " seed ", task.seed);
    }
}

TEST_CASE("task judge gates ranks and latches") {
  WorldState w = empty_room(9);
  w.agent_pos = {4, 4};
  w.agent_dir = Dir::North;
  w.at(4, 3) = {CellKind::Ball, Color::Red, DoorState::None};
  w.at(6, 6) = {CellKind::Key, Color::Blue, DoorState::None};

  GoalAtom go_ball{AtomKind::GoTo, {CellKind::Ball, Color::Red}, {}, 0, std::nullopt};
  GoalAtom go_key{AtomKind::GoTo, {CellKind::Key, Color::Blue}, {}, 1, std::nullopt};

  SUBCASE("later rank is ineligible until the earlier one holds") {
    GoalPredicate goal{{go_key, go_ball}};  // order in the list must not matter
    TaskJudge judge(goal);

    // Stand next to the key first: rank 1 must not latch yet.
    WorldState beside_key = w;
    beside_key.agent_pos = {6, 5};
    judge.on_step(beside_key);
    CHECK(!judge.succeeded());
    CHECK(judge.mask() == 0);

    // Satisfy rank 0, then rank 1.
    judge.on_step(w);  // next to the ball
    CHECK(!judge.succeeded());
    CHECK(judge.mask() != 0);
    judge.on_step(beside_key);
    CHECK(judge.succeeded());
  }

  SUBCASE("same-step cascade completes both ranks at once") {
    // Next to the ball AND the key simultaneously: rank 0 completing makes
    // rank 1 eligible within the same step.
    WorldState both = w;
    both.at(5, 4) = {CellKind::Key, Color::Blue, DoorState::None};
    GoalPredicate goal{{go_ball, go_key}};
    TaskJudge judge(goal);
    judge.on_step(both);
    CHECK(judge.succeeded());
  }

  SUBCASE("satisfaction latches even when the state regresses") {
    GoalPredicate goal{{go_ball}};
    TaskJudge judge(goal);
    judge.on_step(w);
    CHECK(judge.succeeded());
    WorldState away = w;
    away.agent_pos = {1, 6};
    judge.on_step(away);
    CHECK(judge.succeeded());
  }

  SUBCASE("mask save/restore resumes an interrupted trajectory") {
    GoalPredicate goal{{go_ball, go_key}};
    TaskJudge judge(goal);
    judge.on_step(w);
    const uint64_t saved = judge.mask();
    TaskJudge resumed(goal);
    resumed.restore_mask(saved);
    WorldState beside_key = w;
    beside_key.agent_pos = {6, 5};
    resumed.on_step(beside_key);
    CHECK(resumed.succeeded());
  }
}

TEST_CASE("goal atom satisfaction semantics") {
  WorldState w = empty_room(9);
  w.agent_pos = {4, 4};
  w.agent_dir = Dir::South;  // facing away: adjacency must not require facing
  w.at(4, 3) = {CellKind::Ball, Color::Red, DoorState::None};

  CHECK(atom_satisfied(w, {AtomKind::GoTo, {CellKind::Ball, Color::Red}, {}, 0, std::nullopt}));
  CHECK(!atom_satisfied(w, {AtomKind::GoTo, {CellKind::Ball, Color::Blue}, {}, 0, std::nullopt}));
  CHECK(!atom_satisfied(w, {AtomKind::Pickup, {CellKind::Ball, Color::Red}, {}, 0, std::nullopt}));

  w.carried = Carried{CellKind::Ball, Color::Red};
  CHECK(atom_satisfied(w, {AtomKind::Pickup, {CellKind::Ball, Color::Red}, {}, 0, std::nullopt}));

  // Diagonal is not adjacent; orthogonal is.
  WorldState w2 = empty_room(9);
  w2.at(2, 2) = {CellKind::Ball, Color::Red, DoorState::None};
  w2.at(3, 3) = {CellKind::Key, Color::Blue, DoorState::None};
  const GoalAtom put{AtomKind::PutNext,
                     {CellKind::Ball, Color::Red},
                     {CellKind::Key, Color::Blue},
                     0,
                     std::nullopt};
  CHECK(!atom_satisfied(w2, put));
  w2.at(3, 3) = {CellKind::Floor, Color::None, DoorState::None};
  w2.at(2, 3) = {CellKind::Key, Color::Blue, DoorState::None};
  CHECK(atom_satisfied(w2, put));

  // Open wants a door of that color open somewhere.
  WorldState w3 = empty_room(9);
  w3.at(4, 0) = {CellKind::Door, Color::Green, DoorState::Closed};
  const GoalAtom open_green{AtomKind::Open, {CellKind::Door, Color::Green}, {}, 0, std::nullopt};
  CHECK(!atom_satisfied(w3, open_green));
  w3.at(4, 0).door = DoorState::Open;
  CHECK(atom_satisfied(w3, open_green));
}

TEST_CASE("reward is 1 - 0.9 t/H on success and 0 otherwise") {
  CHECK(env_reward(false, 10, 30) == doctest::Approx(0.0));
  CHECK(env_reward(true, 0, 30) == doctest::Approx(1.0));
  CHECK(env_reward(true, 15, 30) == doctest::Approx(1.0 - 0.9 * 0.5));
  CHECK(env_reward(true, 30, 30) == doctest::Approx(0.1));
}

TEST_CASE("egocentric view geometry and occlusion") {
  WorldState w = empty_room(9);
  w.agent_pos = {4, 4};
  w.agent_dir = Dir::North;
  w.at(4, 3) = {CellKind::Ball, Color::Red, DoorState::None};

  SymbolicView v = observe(w);
  // Agent cell: bottom row, centre column, floor when empty-handed.
  CHECK(v.at(kViewAgentRow, kViewAgentCol, 0) == static_cast<uint8_t>(ViewKind::Floor));
  // Ball is directly ahead: one row up, same column.
  CHECK(v.at(kViewAgentRow - 1, kViewAgentCol, 0) == static_cast<uint8_t>(ViewKind::Ball));
  CHECK(v.at(kViewAgentRow - 1, kViewAgentCol, 1) == static_cast<uint8_t>(Color::Red));

  // Carried item is rendered at the agent cell.
  w.carried = Carried{CellKind::Key, Color::Blue};
  v = observe(w);
  CHECK(v.at(kViewAgentRow, kViewAgentCol, 0) == static_cast<uint8_t>(ViewKind::Key));
  CHECK(v.at(kViewAgentRow, kViewAgentCol, 1) == static_cast<uint8_t>(Color::Blue));

  // A wall straight ahead hides everything behind it.
  WorldState blocked = empty_room(9);
  blocked.agent_pos = {4, 5};
  blocked.agent_dir = Dir::North;
  for (int x = 1; x < 8; ++x) blocked.at(x, 4) = {CellKind::Wall, Color::None, DoorState::None};
  blocked.at(4, 2) = {CellKind::Ball, Color::Red, DoorState::None};
  v = observe(blocked);
  CHECK(v.at(kViewAgentRow - 1, kViewAgentCol, 0) == static_cast<uint8_t>(ViewKind::Wall));
  CHECK(v.at(kViewAgentRow - 3, kViewAgentCol, 0) == static_cast<uint8_t>(ViewKind::Unseen));

  // Closed doors occlude; open doors reveal.
  blocked.at(4, 4) = {CellKind::Door, Color::Green, DoorState::Closed};
  v = observe(blocked);
  CHECK(v.at(kViewAgentRow - 1, kViewAgentCol, 0) == static_cast<uint8_t>(ViewKind::Door));
  CHECK(v.at(kViewAgentRow - 3, kViewAgentCol, 0) == static_cast<uint8_t>(ViewKind::Unseen));
  blocked.at(4, 4).door = DoorState::Open;
  v = observe(blocked);
  CHECK(v.at(kViewAgentRow - 3, kViewAgentCol, 0) == static_cast<uint8_t>(ViewKind::Ball));

  // Identical worlds produce identical views; text render is line-per-row.
  CHECK(observe(w) == observe(w));
  const std::string art = render_text(w);
  CHECK(std::count(art.begin(), art.end(), '\n') == w.height);
}

TEST_CASE("level names round-trip and specs match the recipe table") {
  for (const Level level : kLevels) {
    const auto back = level_from_name(level_name(level));
    REQUIRE(back.has_value());
    CHECK(*back == level);
  }
  CHECK(!level_from_name("NoSuchLevel").has_value());

  CHECK(default_level_spec(Level::GoToLocal).map == MapKind::SingleRoom);
  CHECK(default_level_spec(Level::GoToLocal).distractor_count == 7);
  CHECK(default_level_spec(Level::PickupLoc).distractor_count == 7);
  CHECK(default_level_spec(Level::PutNextLocal).distractor_count == 4);
  CHECK(default_level_spec(Level::Open).map == MapKind::Rooms3x3);
  CHECK(default_level_spec(Level::Open).distractor_count == 4);
  CHECK(default_level_spec(Level::SynthSeq).map == MapKind::Rooms3x3);
  CHECK(default_level_spec(Level::SynthSeq).distractor_count == 5);
  CHECK(default_level_spec(Level::BossLevel).distractor_count == 5);
}
