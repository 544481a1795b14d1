#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdg::gridworld {

enum class CellKind : uint8_t { Empty = 0, Wall, Floor, Ball, Box, Key, Door };
enum class Color : uint8_t { None = 0, Red, Green, Blue, Purple, Yellow, Grey };
enum class DoorState : uint8_t { None = 0, Open, Closed };

// Headings; North points toward decreasing y (row 0 is the top of the map).
enum class Dir : uint8_t { North = 0, East, South, West };

// Fixed action indices; policies emit logits in this order.
enum class Action : int {
  TurnLeft = 0,
  TurnRight = 1,
  MoveForward = 2,
  Pick = 3,
  Put = 4,
  Toggle = 5,
};
inline constexpr int kActionCount = 6;

enum class ActionReason : uint8_t {
  Ok = 0,
  Blocked,
  NothingToPick,
  HandsFull,
  DropOccupied,
  NoDoorAhead,
  NothingCarried,
};

struct ActionOutcome {
  bool legal = true;
  ActionReason reason = ActionReason::Ok;
};

struct Cell {
  CellKind kind = CellKind::Floor;
  Color color = Color::None;
  DoorState door = DoorState::None;
  bool operator==(const Cell&) const = default;
};

struct Pos {
  int x = 0;
  int y = 0;
  bool operator==(const Pos&) const = default;
};

struct Carried {
  CellKind kind;
  Color color;
  bool operator==(const Carried&) const = default;
};

struct WorldState {
  int width = 0;
  int height = 0;
  std::vector<Cell> grid;          // row-major, grid[y * width + x]
  std::vector<int16_t> room_map;   // room id per cell, -1 on walls and doorways
  Pos agent_pos;
  Dir agent_dir = Dir::North;
  std::optional<Carried> carried;
  int agent_room = 0;              // room most recently occupied (doorway rule)
  int steps_taken = 0;
  uint64_t seed = 0;

  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  const Cell& at(int x, int y) const { return grid[static_cast<size_t>(y) * width + x]; }
  Cell& at(int x, int y) { return grid[static_cast<size_t>(y) * width + x]; }
  int room_at(int x, int y) const { return room_map[static_cast<size_t>(y) * width + x]; }

  uint64_t hash() const;
};

inline Pos dir_delta(Dir d) {
  switch (d) {
    case Dir::North: return {0, -1};
    case Dir::East: return {1, 0};
    case Dir::South: return {0, 1};
    case Dir::West: return {-1, 0};
  }
  return {0, 0};
}

inline Pos forward_pos(const WorldState& w) {
  const Pos d = dir_delta(w.agent_dir);
  return {w.agent_pos.x + d.x, w.agent_pos.y + d.y};
}

// Transition function. `step` is the pure-value form; `apply` mutates in place
// and is what the rollout loops use.
ActionOutcome apply(WorldState& w, Action a);
std::pair<WorldState, ActionOutcome> step(const WorldState& w, Action a);

// 7x7 egocentric view, agent at (col 3, row 6) facing up. Three channels per
// cell: kind, color, door state. Occluded and out-of-map cells read as unseen.
inline constexpr int kViewSize = 7;
inline constexpr int kViewChannels = 3;
inline constexpr int kViewAgentCol = 3;
inline constexpr int kViewAgentRow = 6;

enum class ViewKind : uint8_t { Unseen = 0, Floor, Wall, Ball, Box, Key, Door };

struct SymbolicView {
  std::array<uint8_t, kViewSize * kViewSize * kViewChannels> data{};
  uint8_t& at(int row, int col, int ch) { return data[(row * kViewSize + col) * kViewChannels + ch]; }
  uint8_t at(int row, int col, int ch) const { return data[(row * kViewSize + col) * kViewChannels + ch]; }
  bool operator==(const SymbolicView&) const = default;
};

// One cell of the egocentric scan with both frames attached; perception and
// observe() share this so their visibility always agrees.
struct ViewCell {
  bool visible = false;
  bool in_grid = false;
  Pos abs;      // absolute grid position (valid when in_grid)
  int rel_x = 0;  // + right of agent
  int rel_y = 0;  // + in front of agent
};

std::array<ViewCell, kViewSize * kViewSize> scan_view(const WorldState& w);
SymbolicView observe(const WorldState& w);

std::string render_text(const WorldState& w);

const char* color_name(Color c);
const char* kind_name(CellKind k);
std::string object_name(CellKind kind, Color color);  // "red ball"
std::string door_name(Color color);                   // "green door"
std::optional<Color> color_from_name(std::string_view s);
std::optional<CellKind> object_kind_from_name(std::string_view s);

}  // namespace sdg::gridworld
