#include <algorithm>

#include "sdg/common/errors.hpp"
#include "sdg/common/rng.hpp"
#include "sdg/gridworld/instruction.hpp"

namespace sdg::gridworld {

namespace {

constexpr int kRoomInterior = 6;

const Color kColors[] = {Color::Red, Color::Green, Color::Blue,
                         Color::Purple, Color::Yellow, Color::Grey};
const CellKind kObjectKinds[] = {CellKind::Ball, CellKind::Box, CellKind::Key};

Color random_color(Rng& rng) { return kColors[rng.uniform_int(0, 5)]; }
CellKind random_kind(Rng& rng) { return kObjectKinds[rng.uniform_int(0, 2)]; }

WorldState build_single_room(Rng&) {
  WorldState w;
  w.width = w.height = kRoomInterior + 2;
  w.grid.assign(static_cast<size_t>(w.width) * w.height, Cell{CellKind::Floor, Color::None, DoorState::None});
  w.room_map.assign(w.grid.size(), 0);
  for (int y = 0; y < w.height; ++y)
    for (int x = 0; x < w.width; ++x)
      if (x == 0 || y == 0 || x == w.width - 1 || y == w.height - 1) {
        w.at(x, y) = Cell{CellKind::Wall, Color::None, DoorState::None};
        w.room_map[static_cast<size_t>(y) * w.width + x] = -1;
      }
  return w;
}

// 3x3 maze of 6x6 rooms; every adjacent pair of rooms gets exactly one closed
// door at a random position on the shared wall.
WorldState build_rooms_3x3(Rng& rng) {
  WorldState w;
  w.width = w.height = 3 * (kRoomInterior + 1) + 1;  // 22
  w.grid.assign(static_cast<size_t>(w.width) * w.height, Cell{CellKind::Floor, Color::None, DoorState::None});
  w.room_map.assign(w.grid.size(), -1);
  for (int y = 0; y < w.height; ++y)
    for (int x = 0; x < w.width; ++x) {
      if (x % (kRoomInterior + 1) == 0 || y % (kRoomInterior + 1) == 0) {
        w.at(x, y) = Cell{CellKind::Wall, Color::None, DoorState::None};
      } else {
        const int room = (y / (kRoomInterior + 1)) * 3 + x / (kRoomInterior + 1);
        w.room_map[static_cast<size_t>(y) * w.width + x] = static_cast<int16_t>(room);
      }
    }
  // Vertical shared walls, then horizontal ones; order is part of determinism.
  for (int r = 0; r < 3; ++r)
    for (int k = 1; k <= 2; ++k) {
      const int x = k * (kRoomInterior + 1);
      const int y = r * (kRoomInterior + 1) + 1 + rng.uniform_int(0, kRoomInterior - 1);
      w.at(x, y) = Cell{CellKind::Door, random_color(rng), DoorState::Closed};
    }
  for (int k = 1; k <= 2; ++k)
    for (int c = 0; c < 3; ++c) {
      const int y = k * (kRoomInterior + 1);
      const int x = c * (kRoomInterior + 1) + 1 + rng.uniform_int(0, kRoomInterior - 1);
      w.at(x, y) = Cell{CellKind::Door, random_color(rng), DoorState::Closed};
    }
  return w;
}

bool near_door(const WorldState& w, int x, int y) {
  const Pos deltas[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const Pos& d : deltas) {
    const int nx = x + d.x, ny = y + d.y;
    if (w.in_bounds(nx, ny) && w.at(nx, ny).kind == CellKind::Door) return true;
  }
  return false;
}

// Floor cells that can hold an object: keep doorway approaches clear.
std::vector<Pos> placement_cells(const WorldState& w) {
  std::vector<Pos> cells;
  for (int y = 0; y < w.height; ++y)
    for (int x = 0; x < w.width; ++x) {
      if (w.at(x, y).kind != CellKind::Floor) continue;
      if (w.agent_pos.x == x && w.agent_pos.y == y) continue;
      if (near_door(w, x, y)) continue;
      cells.push_back({x, y});
    }
  return cells;
}

bool has_free_neighbor(const WorldState& w, Pos p) {
  const Pos deltas[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const Pos& d : deltas) {
    const int nx = p.x + d.x, ny = p.y + d.y;
    if (!w.in_bounds(nx, ny)) continue;
    if (w.at(nx, ny).kind == CellKind::Floor && !(w.agent_pos.x == nx && w.agent_pos.y == ny))
      return true;
  }
  return false;
}

std::optional<Pos> place_object(WorldState& w, const ObjDesc& desc, Rng& rng) {
  std::vector<Pos> cells = placement_cells(w);
  while (!cells.empty()) {
    const int i = rng.uniform_int(0, static_cast<int>(cells.size()) - 1);
    const Pos p = cells[i];
    cells.erase(cells.begin() + i);
    w.at(p.x, p.y) = Cell{desc.kind, desc.color, DoorState::None};
    if (has_free_neighbor(w, p)) return p;
    w.at(p.x, p.y) = Cell{CellKind::Floor, Color::None, DoorState::None};
  }
  return std::nullopt;
}

std::vector<Color> door_colors(const WorldState& w) {
  std::vector<Color> colors;
  for (const Cell& c : w.grid)
    if (c.kind == CellKind::Door) colors.push_back(c.color);
  return colors;
}

bool putnext_initially_adjacent(const WorldState& w, const GoalPredicate& goal) {
  for (const GoalAtom& atom : goal.atoms) {
    if (atom.kind != AtomKind::PutNext) continue;
    GoalAtom probe = atom;
    probe.rank = 0;
    if (atom_satisfied(w, probe)) return true;
  }
  return false;
}

std::optional<LocQualifier> pick_qualifier(const WorldState& w, Pos obj, Rng& rng) {
  const int dx = obj.x - w.agent_pos.x;
  const int dy = obj.y - w.agent_pos.y;
  int f = 0, r = 0;
  switch (w.agent_dir) {
    case Dir::North: f = -dy; r = dx; break;
    case Dir::East: f = dx; r = dy; break;
    case Dir::South: f = dy; r = -dx; break;
    case Dir::West: f = -dx; r = -dy; break;
  }
  std::vector<LocQualifier> valid;
  if (r < 0) valid.push_back(LocQualifier::Left);
  if (r > 0) valid.push_back(LocQualifier::Right);
  if (f > 0) valid.push_back(LocQualifier::Front);
  if (f < 0) valid.push_back(LocQualifier::Behind);
  if (valid.empty()) return std::nullopt;
  return valid[rng.uniform_int(0, static_cast<int>(valid.size()) - 1)];
}

struct GoalDraft {
  GoalPredicate goal;
  std::vector<std::optional<Pos>> primary_pos;  // placed instance of atom.a
};

// Samples atoms and places the referenced objects. Returns nullopt when the
// draw is internally inconsistent (duplicate descriptors, no door color, no
// space); the caller retries with fresh randomness.
std::optional<GoalDraft> sample_goal(WorldState& w, const LevelSpec& spec, Rng& rng) {
  GoalDraft draft;
  auto desc_used = [&draft](const ObjDesc& d) {
    for (const GoalAtom& a : draft.goal.atoms) {
      if (a.a == d) return true;
      if (a.kind == AtomKind::PutNext && a.b == d) return true;
    }
    return false;
  };
  auto fresh_desc = [&](Rng& r) -> std::optional<ObjDesc> {
    for (int i = 0; i < 64; ++i) {
      ObjDesc d{random_kind(r), random_color(r)};
      if (!desc_used(d)) return d;
    }
    return std::nullopt;
  };

  int atom_count = 1;
  if (spec.level == Level::SynthSeq) atom_count = 2;
  if (spec.level == Level::BossLevel) atom_count = rng.uniform_int(1, 3);

  for (int i = 0; i < atom_count; ++i) {
    GoalAtom atom;
    switch (spec.level) {
      case Level::GoToLocal: atom.kind = AtomKind::GoTo; break;
      case Level::PickupLoc: atom.kind = AtomKind::Pickup; break;
      case Level::PutNextLocal: atom.kind = AtomKind::PutNext; break;
      case Level::Open: atom.kind = AtomKind::Open; break;
      case Level::SynthSeq:
      case Level::BossLevel: {
        const AtomKind kinds[] = {AtomKind::GoTo, AtomKind::Pickup, AtomKind::PutNext, AtomKind::Open};
        atom.kind = kinds[rng.uniform_int(0, 3)];
        break;
      }
    }
    if (atom.kind == AtomKind::Open) {
      std::vector<Color> colors = door_colors(w);
      std::erase_if(colors, [&](Color c) { return desc_used(ObjDesc{CellKind::Door, c}); });
      if (colors.empty()) return std::nullopt;
      atom.a = ObjDesc{CellKind::Door, colors[rng.uniform_int(0, static_cast<int>(colors.size()) - 1)]};
      draft.goal.atoms.push_back(atom);
      draft.primary_pos.push_back(std::nullopt);
      continue;
    }
    const auto a = fresh_desc(rng);
    if (!a) return std::nullopt;
    atom.a = *a;
    std::optional<Pos> a_pos = place_object(w, atom.a, rng);
    if (!a_pos) return std::nullopt;
    if (atom.kind == AtomKind::PutNext) {
      const auto b = fresh_desc(rng);
      if (!b) return std::nullopt;
      atom.b = *b;
      if (!place_object(w, atom.b, rng)) return std::nullopt;
    }
    draft.goal.atoms.push_back(atom);
    draft.primary_pos.push_back(a_pos);
  }

  // Sequencing structure: single atoms stay rank 0; otherwise draw a random
  // partition of consecutive atoms into ranks.
  if (atom_count == 2) {
    const bool same_rank = rng.uniform() < 0.34;
    draft.goal.atoms[1].rank = same_rank ? 0 : 1;
  } else if (atom_count == 3) {
    const int structure = rng.uniform_int(0, 3);
    const int ranks[4][3] = {{0, 1, 2}, {0, 0, 1}, {0, 1, 1}, {0, 0, 0}};
    for (int i = 0; i < 3; ++i) draft.goal.atoms[i].rank = ranks[structure][i];
  }

  if (spec.level == Level::BossLevel) {
    for (size_t i = 0; i < draft.goal.atoms.size(); ++i) {
      if (!draft.primary_pos[i] || rng.uniform() >= 0.3) continue;
      draft.goal.atoms[i].qualifier = pick_qualifier(w, *draft.primary_pos[i], rng);
    }
  }
  return draft;
}

}  // namespace

std::pair<InstructionTask, WorldState> generate_task(const LevelSpec& spec, uint64_t seed) {
  uint64_t stream = seed ^ hash64(level_name(spec.level));
  Rng rng(splitmix64(stream));

  for (int attempt = 0; attempt < 1000; ++attempt) {
    WorldState w = spec.map == MapKind::SingleRoom ? build_single_room(rng) : build_rooms_3x3(rng);
    w.seed = seed;

    std::vector<Pos> floors;
    for (int y = 0; y < w.height; ++y)
      for (int x = 0; x < w.width; ++x)
        if (w.at(x, y).kind == CellKind::Floor) floors.push_back({x, y});
    w.agent_pos = floors[rng.uniform_int(0, static_cast<int>(floors.size()) - 1)];
    w.agent_dir = static_cast<Dir>(rng.uniform_int(0, 3));
    w.agent_room = w.room_at(w.agent_pos.x, w.agent_pos.y);

    auto draft = sample_goal(w, spec, rng);
    if (!draft) continue;
    bool placed_all = true;
    for (int i = 0; i < spec.distractor_count; ++i) {
      const ObjDesc d{random_kind(rng), random_color(rng)};
      if (!place_object(w, d, rng)) {
        placed_all = false;
        break;
      }
    }
    if (!placed_all) continue;
    if (putnext_initially_adjacent(w, draft->goal)) continue;

    InstructionTask task;
    task.level = spec;
    task.goal = draft->goal;
    task.seed = seed;
    task.text = instruction_text(task.goal, rng.next_u64());
    if (task_success(w, task)) continue;
    return {std::move(task), std::move(w)};
  }
  throw Error("task generation failed for level " + std::string(level_name(spec.level)));
}

std::pair<InstructionTask, WorldState> generate_task(Level level, uint64_t seed) {
  return generate_task(default_level_spec(level), seed);
}

}  // namespace sdg::gridworld
