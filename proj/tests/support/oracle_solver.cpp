#include "support/oracle_solver.hpp"

#include <algorithm>
#include <deque>

namespace sdg::support {

namespace {

using namespace sdg::gridworld;

bool desc_matches(const Cell& c, const ObjDesc& d) {
  return c.kind == d.kind && c.color == d.color;
}

// Cells the agent may occupy (closed doors get toggled open on the way).
bool stand_ok(const Cell& c) { return c.kind == CellKind::Floor || c.kind == CellKind::Door; }

bool is_movable(const Cell& c) {
  return c.kind == CellKind::Ball || c.kind == CellKind::Box || c.kind == CellKind::Key;
}

Dir facing(Pos from, Pos to) {
  if (to.y < from.y) return Dir::North;
  if (to.x > from.x) return Dir::East;
  if (to.y > from.y) return Dir::South;
  return Dir::West;
}

int state_index(const WorldState& w, int x, int y, int d) { return (y * w.width + x) * 4 + d; }

// States standing next to a `pred` cell; facing it when `must_face`. Movable
// neighbours are included so blocked-path planning can aim "through" them;
// exact navigation simply never reaches those states.
template <typename Pred>
std::vector<char> beside_mask(const WorldState& w, bool must_face, Pred pred) {
  std::vector<char> mask(static_cast<std::size_t>(w.width * w.height * 4), 0);
  for (int y = 0; y < w.height; ++y)
    for (int x = 0; x < w.width; ++x) {
      if (!pred(w.at(x, y))) continue;
      constexpr int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k], ny = y + dy[k];
        if (!w.in_bounds(nx, ny)) continue;
        if (!stand_ok(w.at(nx, ny)) && !is_movable(w.at(nx, ny))) continue;
        if (must_face) {
          mask[static_cast<std::size_t>(
              state_index(w, nx, ny, static_cast<int>(facing({nx, ny}, {x, y}))))] = 1;
        } else {
          for (int d = 0; d < 4; ++d)
            mask[static_cast<std::size_t>(state_index(w, nx, ny, d))] = 1;
        }
      }
    }
  return mask;
}

// States at the four neighbours of `target`, facing it.
std::vector<char> facing_cell_mask(const WorldState& w, Pos target) {
  std::vector<char> mask(static_cast<std::size_t>(w.width * w.height * 4), 0);
  constexpr int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  for (int k = 0; k < 4; ++k) {
    const int nx = target.x + dx[k], ny = target.y + dy[k];
    if (!w.in_bounds(nx, ny) || !stand_ok(w.at(nx, ny))) continue;
    mask[static_cast<std::size_t>(
        state_index(w, nx, ny, static_cast<int>(facing({nx, ny}, target))))] = 1;
  }
  return mask;
}

// States whose front cell is plain floor passing `pred(pos)` (put targets).
template <typename Pred>
std::vector<char> front_floor_mask(const WorldState& w, Pred pred) {
  std::vector<char> mask(static_cast<std::size_t>(w.width * w.height * 4), 0);
  for (int y = 0; y < w.height; ++y)
    for (int x = 0; x < w.width; ++x) {
      if (!stand_ok(w.at(x, y)) && !is_movable(w.at(x, y))) continue;
      for (int d = 0; d < 4; ++d) {
        const Pos delta = dir_delta(static_cast<Dir>(d));
        const int fx = x + delta.x, fy = y + delta.y;
        if (!w.in_bounds(fx, fy)) continue;
        if (w.at(fx, fy).kind != CellKind::Floor) continue;
        if (!pred(Pos{fx, fy})) continue;
        mask[static_cast<std::size_t>(state_index(w, x, y, d))] = 1;
      }
    }
  return mask;
}

// Shortest turn/move path to any goal state; closed doors along the path are
// opened with an inserted toggle. Empty plan when already at a goal state.
std::optional<std::vector<Action>> navigate(const WorldState& w, const std::vector<char>& goal) {
  const int n = w.width * w.height * 4;
  const int start =
      state_index(w, w.agent_pos.x, w.agent_pos.y, static_cast<int>(w.agent_dir));
  if (goal[static_cast<std::size_t>(start)]) return std::vector<Action>{};

  std::vector<int> parent(static_cast<std::size_t>(n), -2);
  std::vector<Action> via(static_cast<std::size_t>(n), Action::TurnLeft);
  std::deque<int> queue{start};
  parent[static_cast<std::size_t>(start)] = -1;
  int found = -1;
  while (found < 0 && !queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    const int d = cur & 3, cell = cur >> 2;
    const int x = cell % w.width, y = cell / w.width;

    struct EdgeT {
      int next;
      Action act;
    } edges[3];
    int m = 0;
    edges[m++] = {(cell << 2) | ((d + 3) & 3), Action::TurnLeft};
    edges[m++] = {(cell << 2) | ((d + 1) & 3), Action::TurnRight};
    const Pos delta = dir_delta(static_cast<Dir>(d));
    const int fx = x + delta.x, fy = y + delta.y;
    if (w.in_bounds(fx, fy) && stand_ok(w.at(fx, fy)))
      edges[m++] = {state_index(w, fx, fy, d), Action::MoveForward};

    for (int i = 0; i < m && found < 0; ++i) {
      const auto next = static_cast<std::size_t>(edges[i].next);
      if (parent[next] != -2) continue;
      parent[next] = cur;
      via[next] = edges[i].act;
      if (goal[next]) found = edges[i].next;
      queue.push_back(edges[i].next);
    }
  }
  if (found < 0) return std::nullopt;

  std::vector<Action> path;
  for (int s = found; parent[static_cast<std::size_t>(s)] != -1;
       s = parent[static_cast<std::size_t>(s)])
    path.push_back(via[static_cast<std::size_t>(s)]);
  std::reverse(path.begin(), path.end());

  WorldState sim = w;
  std::vector<Action> out;
  for (Action a : path) {
    if (a == Action::MoveForward) {
      const Pos f = forward_pos(sim);
      if (sim.at(f.x, f.y).kind == CellKind::Door && sim.at(f.x, f.y).door == DoorState::Closed) {
        apply(sim, Action::Toggle);
        out.push_back(Action::Toggle);
      }
    }
    apply(sim, a);
    out.push_back(a);
  }
  return out;
}

bool grid_has_match(const WorldState& w, const ObjDesc& d) {
  for (const Cell& c : w.grid)
    if (desc_matches(c, d)) return true;
  return false;
}

// Relaxed-path probe: BFS with movable objects treated as walkable, returning
// the first object cell along a shortest path to the goal. nullopt means the
// goal is sealed off even with unlimited clearing.
std::optional<Pos> first_blocker(const WorldState& w, const std::vector<char>& goal) {
  const int n = w.width * w.height * 4;
  const int start = state_index(w, w.agent_pos.x, w.agent_pos.y, static_cast<int>(w.agent_dir));
  std::vector<int> parent(static_cast<std::size_t>(n), -2);
  std::deque<int> queue{start};
  parent[static_cast<std::size_t>(start)] = -1;
  int found = goal[static_cast<std::size_t>(start)] ? start : -1;
  while (found < 0 && !queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    const int d = cur & 3, cell = cur >> 2;
    const int x = cell % w.width, y = cell / w.width;
    int nexts[3];
    int m = 0;
    nexts[m++] = (cell << 2) | ((d + 3) & 3);
    nexts[m++] = (cell << 2) | ((d + 1) & 3);
    const Pos delta = dir_delta(static_cast<Dir>(d));
    const int fx = x + delta.x, fy = y + delta.y;
    if (w.in_bounds(fx, fy) && (stand_ok(w.at(fx, fy)) || is_movable(w.at(fx, fy))))
      nexts[m++] = state_index(w, fx, fy, d);
    for (int i = 0; i < m && found < 0; ++i) {
      const auto next = static_cast<std::size_t>(nexts[i]);
      if (parent[next] != -2) continue;
      parent[next] = cur;
      if (goal[next]) found = nexts[i];
      queue.push_back(nexts[i]);
    }
  }
  if (found < 0) return std::nullopt;
  std::optional<Pos> blocker;
  for (int s = found; s != -1; s = parent[static_cast<std::size_t>(s)]) {
    const int cell = s >> 2;
    const Pos p{cell % w.width, cell / w.width};
    if (is_movable(w.at(p.x, p.y))) blocker = p;  // chain walks goal→start: keep the earliest
  }
  return blocker;
}

}  // namespace

std::optional<std::vector<Action>> solve_atom(const WorldState& w0, const GoalAtom& atom) {
  WorldState sim = w0;
  std::vector<Action> out;
  const auto run = [&](Action a) {
    apply(sim, a);
    out.push_back(a);
  };
  const auto nav = [&](const std::vector<char>& mask) {
    const auto plan = navigate(sim, mask);
    if (!plan) return false;
    for (Action a : *plan) run(a);
    return true;
  };
  const auto drop_carried = [&]() {
    if (!sim.carried) return true;
    if (!nav(front_floor_mask(sim, [](Pos) { return true; }))) return false;
    run(Action::Put);
    return true;
  };
  // Parks the carried object on a side cell without leaving the current pose.
  // The behind cell is preferred: it is the one just walked through, so it
  // cannot sit on the remaining path.
  const auto place_aside = [&]() {
    if (!sim.carried) return true;
    const struct {
      Action turn_out;
      Action turn_back;
      int spins;
    } options[] = {{Action::TurnLeft, Action::TurnRight, 2},
                   {Action::TurnLeft, Action::TurnRight, 1},
                   {Action::TurnRight, Action::TurnLeft, 1}};
    for (const auto& opt : options) {
      WorldState probe = sim;
      for (int i = 0; i < opt.spins; ++i) apply(probe, opt.turn_out);
      const Pos f = forward_pos(probe);
      if (!probe.in_bounds(f.x, f.y) || probe.at(f.x, f.y).kind != CellKind::Floor) continue;
      for (int i = 0; i < opt.spins; ++i) run(opt.turn_out);
      run(Action::Put);
      for (int i = 0; i < opt.spins; ++i) run(opt.turn_back);
      return true;
    }
    return drop_carried();
  };
  // Navigation with unblocking: distractors can wall off a pocket around the
  // agent or the target. When no exact path exists, lift the first object on
  // a relaxed path (objects walkable) and park it aside, then replan. `done`
  // short-circuits when the atom got satisfied along the way.
  const auto ensure_nav = [&](auto mask_builder, auto done) {
    for (int round = 0; round < 10; ++round) {
      if (done()) return true;
      if (nav(mask_builder())) return true;
      const std::optional<Pos> blocker = first_blocker(sim, mask_builder());
      if (!blocker) return false;
      if (!nav(facing_cell_mask(sim, *blocker))) return false;
      if (sim.carried && !place_aside()) return false;
      const Pos f = forward_pos(sim);
      if (sim.in_bounds(f.x, f.y) && is_movable(sim.at(f.x, f.y))) run(Action::Pick);
    }
    return false;
  };
  const auto matches = [](const ObjDesc& d) {
    return [d](const Cell& c) { return desc_matches(c, d); };
  };
  const auto satisfied = [&]() { return atom_satisfied(sim, atom); };
  // Reaches a facing-the-target state and empties the hands for a pick. The
  // loop re-navigates because place_aside may fall back to a wandering drop.
  const auto face_for_pick = [&](const ObjDesc& d) {
    for (int round = 0; round < 4; ++round) {
      if (!ensure_nav([&]() { return beside_mask(sim, true, matches(d)); },
                      [&]() { return false; }))
        return false;
      if (!sim.carried) return true;
      if (!place_aside()) return false;
    }
    return false;
  };

  if (atom_satisfied(sim, atom)) return out;

  switch (atom.kind) {
    case AtomKind::GoTo: {
      if (!grid_has_match(sim, atom.a)) {
        // The only copy may be in hand: putting it down leaves us beside it.
        if (!(sim.carried && sim.carried->kind == atom.a.kind &&
              sim.carried->color == atom.a.color))
          return std::nullopt;
        if (!drop_carried()) return std::nullopt;
        break;
      }
      if (!ensure_nav([&]() { return beside_mask(sim, false, matches(atom.a)); }, satisfied))
        return std::nullopt;
      break;
    }
    case AtomKind::Pickup: {
      if (!face_for_pick(atom.a)) return std::nullopt;
      run(Action::Pick);
      break;
    }
    case AtomKind::PutNext: {
      const bool holding_a = sim.carried && sim.carried->kind == atom.a.kind &&
                             sim.carried->color == atom.a.color;
      if (!holding_a) {
        if (!face_for_pick(atom.a)) return std::nullopt;
        run(Action::Pick);
      }
      const auto beside_b = [&](Pos p) {
        constexpr int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nx = p.x + dx[k], ny = p.y + dy[k];
          if (sim.in_bounds(nx, ny) && desc_matches(sim.at(nx, ny), atom.b)) return true;
        }
        return false;
      };
      if (!nav(front_floor_mask(sim, beside_b))) return std::nullopt;
      run(Action::Put);
      break;
    }
    case AtomKind::Open: {
      const auto is_door = [&](const Cell& c) {
        return c.kind == CellKind::Door && c.color == atom.a.color;
      };
      if (!ensure_nav([&]() { return beside_mask(sim, true, is_door); }, satisfied))
        return std::nullopt;
      const Pos f = forward_pos(sim);
      if (sim.at(f.x, f.y).kind == CellKind::Door && sim.at(f.x, f.y).door == DoorState::Closed)
        run(Action::Toggle);
      break;
    }
  }
  return atom_satisfied(sim, atom) ? std::optional(std::move(out)) : std::nullopt;
}

std::optional<std::vector<Action>> solve_task(const WorldState& w0, const InstructionTask& task) {
  std::vector<const GoalAtom*> ordered;
  for (const GoalAtom& atom : task.goal.atoms) ordered.push_back(&atom);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const GoalAtom* a, const GoalAtom* b) { return a->rank < b->rank; });

  WorldState w = w0;
  std::vector<Action> out;
  for (const GoalAtom* atom : ordered) {
    auto plan = solve_atom(w, *atom);
    if (!plan) return std::nullopt;
    if (plan->empty()) *plan = {Action::TurnLeft, Action::TurnRight};
    for (Action a : *plan) {
      apply(w, a);
      out.push_back(a);
    }
  }
  return out;
}

}  // namespace sdg::support
