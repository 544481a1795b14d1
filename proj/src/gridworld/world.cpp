#include "sdg/gridworld/types.hpp"

#include <algorithm>
#include <cstring>

#include "sdg/common/rng.hpp"

namespace sdg::gridworld {

namespace {

bool walkable(const Cell& c) {
  return c.kind == CellKind::Floor || (c.kind == CellKind::Door && c.door == DoorState::Open);
}

bool is_object(const Cell& c) {
  return c.kind == CellKind::Ball || c.kind == CellKind::Box || c.kind == CellKind::Key;
}

// Closed doors and walls block sight; everything else transmits it.
bool transparent(const Cell& c) {
  if (c.kind == CellKind::Wall) return false;
  if (c.kind == CellKind::Door && c.door == DoorState::Closed) return false;
  return true;
}

}  // namespace

uint64_t WorldState::hash() const {
  uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (i * 8)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  mix(static_cast<uint64_t>(width));
  mix(static_cast<uint64_t>(height));
  for (const Cell& c : grid) {
    mix(static_cast<uint64_t>(c.kind) | (static_cast<uint64_t>(c.color) << 8) |
        (static_cast<uint64_t>(c.door) << 16));
  }
  mix(static_cast<uint64_t>(agent_pos.x));
  mix(static_cast<uint64_t>(agent_pos.y));
  mix(static_cast<uint64_t>(agent_dir));
  mix(carried ? (1ull | (static_cast<uint64_t>(carried->kind) << 8) |
                 (static_cast<uint64_t>(carried->color) << 16))
              : 0ull);
  mix(static_cast<uint64_t>(agent_room));
  mix(static_cast<uint64_t>(steps_taken));
  mix(seed);
  return h;
}

ActionOutcome apply(WorldState& w, Action a) {
  ActionOutcome out;
  w.steps_taken += 1;
  switch (a) {
    case Action::TurnLeft:
      w.agent_dir = static_cast<Dir>((static_cast<int>(w.agent_dir) + 3) % 4);
      break;
    case Action::TurnRight:
      w.agent_dir = static_cast<Dir>((static_cast<int>(w.agent_dir) + 1) % 4);
      break;
    case Action::MoveForward: {
      const Pos f = forward_pos(w);
      if (!w.in_bounds(f.x, f.y) || !walkable(w.at(f.x, f.y))) {
        out = {false, ActionReason::Blocked};
        break;
      }
      w.agent_pos = f;
      const int room = w.room_at(f.x, f.y);
      if (room >= 0) w.agent_room = room;
      break;
    }
    case Action::Pick: {
      const Pos f = forward_pos(w);
      if (!w.in_bounds(f.x, f.y) || !is_object(w.at(f.x, f.y))) {
        out = {false, ActionReason::NothingToPick};
        break;
      }
      if (w.carried) {
        out = {false, ActionReason::HandsFull};
        break;
      }
      Cell& c = w.at(f.x, f.y);
      w.carried = Carried{c.kind, c.color};
      c = Cell{CellKind::Floor, Color::None, DoorState::None};
      break;
    }
    case Action::Put: {
      if (!w.carried) {
        out = {false, ActionReason::NothingCarried};
        break;
      }
      const Pos f = forward_pos(w);
      if (!w.in_bounds(f.x, f.y) || w.at(f.x, f.y).kind != CellKind::Floor) {
        out = {false, ActionReason::DropOccupied};
        break;
      }
      w.at(f.x, f.y) = Cell{w.carried->kind, w.carried->color, DoorState::None};
      w.carried.reset();
      break;
    }
    case Action::Toggle: {
      const Pos f = forward_pos(w);
      if (!w.in_bounds(f.x, f.y) || w.at(f.x, f.y).kind != CellKind::Door) {
        out = {false, ActionReason::NoDoorAhead};
        break;
      }
      Cell& c = w.at(f.x, f.y);
      c.door = c.door == DoorState::Open ? DoorState::Closed : DoorState::Open;
      break;
    }
  }
  return out;
}

std::pair<WorldState, ActionOutcome> step(const WorldState& w, Action a) {
  WorldState next = w;
  ActionOutcome out = apply(next, a);
  return {std::move(next), out};
}

std::array<ViewCell, kViewSize * kViewSize> scan_view(const WorldState& w) {
  std::array<ViewCell, kViewSize * kViewSize> cells{};

  // Map each window cell into the absolute frame.
  for (int row = 0; row < kViewSize; ++row) {
    for (int col = 0; col < kViewSize; ++col) {
      ViewCell& vc = cells[row * kViewSize + col];
      vc.rel_x = col - kViewAgentCol;
      vc.rel_y = kViewAgentRow - row;
      int ax = 0, ay = 0;
      switch (w.agent_dir) {
        case Dir::North: ax = w.agent_pos.x + vc.rel_x; ay = w.agent_pos.y - vc.rel_y; break;
        case Dir::East:  ax = w.agent_pos.x + vc.rel_y; ay = w.agent_pos.y + vc.rel_x; break;
        case Dir::South: ax = w.agent_pos.x - vc.rel_x; ay = w.agent_pos.y + vc.rel_y; break;
        case Dir::West:  ax = w.agent_pos.x - vc.rel_y; ay = w.agent_pos.y - vc.rel_x; break;
      }
      vc.abs = {ax, ay};
      vc.in_grid = w.in_bounds(ax, ay);
    }
  }

  // Flood fill from the agent through sight-transmitting cells, then expose
  // opaque cells that border the lit region (wall and closed-door faces).
  std::array<bool, kViewSize * kViewSize> lit{};
  std::vector<int> stack;
  const int start = kViewAgentRow * kViewSize + kViewAgentCol;
  if (cells[start].in_grid && transparent(w.at(cells[start].abs.x, cells[start].abs.y))) {
    lit[start] = true;
    stack.push_back(start);
  }
  const int dr[4] = {-1, 1, 0, 0};
  const int dc[4] = {0, 0, -1, 1};
  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    const int row = idx / kViewSize, col = idx % kViewSize;
    for (int k = 0; k < 4; ++k) {
      const int nr = row + dr[k], nc = col + dc[k];
      if (nr < 0 || nr >= kViewSize || nc < 0 || nc >= kViewSize) continue;
      const int nidx = nr * kViewSize + nc;
      if (lit[nidx]) continue;
      const ViewCell& vc = cells[nidx];
      if (!vc.in_grid || !transparent(w.at(vc.abs.x, vc.abs.y))) continue;
      lit[nidx] = true;
      stack.push_back(nidx);
    }
  }
  for (int idx = 0; idx < kViewSize * kViewSize; ++idx) {
    if (lit[idx]) {
      cells[idx].visible = true;
      continue;
    }
    if (!cells[idx].in_grid) continue;
    const int row = idx / kViewSize, col = idx % kViewSize;
    for (int k = 0; k < 4; ++k) {
      const int nr = row + dr[k], nc = col + dc[k];
      if (nr < 0 || nr >= kViewSize || nc < 0 || nc >= kViewSize) continue;
      if (lit[nr * kViewSize + nc]) {
        cells[idx].visible = true;
        break;
      }
    }
  }
  if (cells[start].in_grid) cells[start].visible = true;
  return cells;
}

SymbolicView observe(const WorldState& w) {
  SymbolicView view;
  const auto cells = scan_view(w);
  for (int row = 0; row < kViewSize; ++row) {
    for (int col = 0; col < kViewSize; ++col) {
      const ViewCell& vc = cells[row * kViewSize + col];
      uint8_t kind = static_cast<uint8_t>(ViewKind::Unseen);
      uint8_t color = 0, door = 0;
      if (vc.visible && vc.in_grid) {
        const Cell& c = w.at(vc.abs.x, vc.abs.y);
        switch (c.kind) {
          case CellKind::Floor: kind = static_cast<uint8_t>(ViewKind::Floor); break;
          case CellKind::Wall: kind = static_cast<uint8_t>(ViewKind::Wall); break;
          case CellKind::Ball: kind = static_cast<uint8_t>(ViewKind::Ball); break;
          case CellKind::Box: kind = static_cast<uint8_t>(ViewKind::Box); break;
          case CellKind::Key: kind = static_cast<uint8_t>(ViewKind::Key); break;
          case CellKind::Door: kind = static_cast<uint8_t>(ViewKind::Door); break;
          case CellKind::Empty: kind = static_cast<uint8_t>(ViewKind::Floor); break;
        }
        color = static_cast<uint8_t>(c.color);
        door = static_cast<uint8_t>(c.door);
      }
      view.at(row, col, 0) = kind;
      view.at(row, col, 1) = color;
      view.at(row, col, 2) = door;
    }
  }
  // The agent cell shows the carried item, floor otherwise.
  if (w.carried) {
    uint8_t kind = static_cast<uint8_t>(ViewKind::Ball);
    if (w.carried->kind == CellKind::Box) kind = static_cast<uint8_t>(ViewKind::Box);
    if (w.carried->kind == CellKind::Key) kind = static_cast<uint8_t>(ViewKind::Key);
    view.at(kViewAgentRow, kViewAgentCol, 0) = kind;
    view.at(kViewAgentRow, kViewAgentCol, 1) = static_cast<uint8_t>(w.carried->color);
    view.at(kViewAgentRow, kViewAgentCol, 2) = 0;
  }
  return view;
}

std::string render_text(const WorldState& w) {
  std::string out;
  out.reserve(static_cast<size_t>((w.width * 3 + 1) * w.height));
  const char color_glyph[] = {'.', 'R', 'G', 'B', 'P', 'Y', 'E'};
  for (int y = 0; y < w.height; ++y) {
    for (int x = 0; x < w.width; ++x) {
      if (w.agent_pos.x == x && w.agent_pos.y == y) {
        const char arrows[] = {'^', '>', 'v', '<'};
        out += arrows[static_cast<int>(w.agent_dir)];
        out += arrows[static_cast<int>(w.agent_dir)];
      } else {
        const Cell& c = w.at(x, y);
        switch (c.kind) {
          case CellKind::Wall: out += "##"; break;
          case CellKind::Floor:
          case CellKind::Empty: out += ".."; break;
          case CellKind::Ball: out += 'o'; out += color_glyph[static_cast<int>(c.color)]; break;
          case CellKind::Box: out += 'b'; out += color_glyph[static_cast<int>(c.color)]; break;
          case CellKind::Key: out += 'k'; out += color_glyph[static_cast<int>(c.color)]; break;
          case CellKind::Door:
            out += c.door == DoorState::Open ? 'O' : 'D';
            out += color_glyph[static_cast<int>(c.color)];
            break;
        }
      }
      out += ' ';
    }
    out += '\n';
  }
  return out;
}

const char* color_name(Color c) {
  switch (c) {
    case Color::Red: return "red";
    case Color::Green: return "green";
    case Color::Blue: return "blue";
    case Color::Purple: return "purple";
    case Color::Yellow: return "yellow";
    case Color::Grey: return "grey";
    case Color::None: return "none";
  }
  return "none";
}

const char* kind_name(CellKind k) {
  switch (k) {
    case CellKind::Ball: return "ball";
    case CellKind::Box: return "box";
    case CellKind::Key: return "key";
    case CellKind::Door: return "door";
    case CellKind::Wall: return "wall";
    case CellKind::Floor: return "floor";
    case CellKind::Empty: return "empty";
  }
  return "empty";
}

std::string object_name(CellKind kind, Color color) {
  return std::string(color_name(color)) + " " + kind_name(kind);
}

std::string door_name(Color color) {
  return std::string(color_name(color)) + " door";
}

std::optional<Color> color_from_name(std::string_view s) {
  for (Color c : {Color::Red, Color::Green, Color::Blue, Color::Purple, Color::Yellow, Color::Grey}) {
    if (s == color_name(c)) return c;
  }
  return std::nullopt;
}

std::optional<CellKind> object_kind_from_name(std::string_view s) {
  for (CellKind k : {CellKind::Ball, CellKind::Box, CellKind::Key}) {
    if (s == kind_name(k)) return k;
  }
  return std::nullopt;
}

}  // namespace sdg::gridworld
