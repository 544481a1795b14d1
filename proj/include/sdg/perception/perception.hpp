#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdg/gridworld/types.hpp"

namespace sdg::perception {

// Door entry: relative position, status (0 = open, 1 = closed), and the id of
// the room the door leads to (the side away from the agent's current room).
struct DoorInfo {
  int x = 0;
  int y = 0;
  int status = 0;
  int room_id = 0;
  bool operator==(const DoorInfo&) const = default;
};

// Symbolic summary of the current egocentric view. `visited_rooms` is the log
// as of before the latest room entry so freshly-entered rooms still read as
// unvisited; see EpisodeContext.
struct PerceptionSnapshot {
  std::map<std::string, std::pair<int, int>> objects;
  std::optional<std::string> carried;
  std::map<std::string, DoorInfo> doors;
  std::vector<int> visited_rooms;
  int current_room = 0;

  nlohmann::json to_json() const;
};

// Ordered, deduplicated record of rooms entered during the episode.
class VisitLog {
 public:
  explicit VisitLog(int start_room = 0) : visited_{start_room}, current_(start_room) {}
  void enter(int room) {
    for (int r : visited_)
      if (r == room) return;
    visited_.push_back(room);
  }
  // Forgets everything except the current room.
  void flush() { visited_ = {current_}; }
  const std::vector<int>& visited() const { return visited_; }
  int current() const { return current_; }
  void set_current(int room) {
    current_ = room;
    enter(room);
  }

 private:
  std::vector<int> visited_;
  int current_;
};

std::map<std::string, std::pair<int, int>> get_observation(const gridworld::WorldState& w);
std::optional<std::string> get_carried(const gridworld::WorldState& w);
std::map<std::string, DoorInfo> get_doors_in_observation(const gridworld::WorldState& w);
int get_current_room(const gridworld::WorldState& w);
std::vector<int> get_visited_rooms(const VisitLog& log);
void flush(VisitLog& log);

PerceptionSnapshot make_snapshot(const gridworld::WorldState& w,
                                 const std::vector<int>& visited_pre_entry,
                                 int current_room);

// Couples a world with its visit log and enforces the evaluation ordering:
// checks run against the snapshot taken after the step but before the room
// entry is logged, so "just entered an unvisited room" is observable.
class EpisodeContext {
 public:
  explicit EpisodeContext(gridworld::WorldState w);

  gridworld::ActionOutcome apply(gridworld::Action a);
  const PerceptionSnapshot& last_snapshot() const { return last_snapshot_; }
  // Snapshot with the fully up-to-date log (used for loop guards).
  PerceptionSnapshot current_snapshot() const;
  void flush_log();

  const gridworld::WorldState& world() const { return world_; }
  const VisitLog& log() const { return log_; }

 private:
  gridworld::WorldState world_;
  VisitLog log_;
  PerceptionSnapshot last_snapshot_;
};

}  // namespace sdg::perception
