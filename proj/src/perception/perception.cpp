#include "sdg/perception/perception.hpp"

#include <algorithm>

namespace sdg::perception {

using gridworld::CellKind;
using gridworld::WorldState;

namespace {

// Nearest instance wins on name collisions; ties prefer smaller x, then y.
bool closer(std::pair<int, int> a, std::pair<int, int> b) {
  const int da = std::abs(a.first) + std::abs(a.second);
  const int db = std::abs(b.first) + std::abs(b.second);
  if (da != db) return da < db;
  if (a.first != b.first) return a.first < b.first;
  return a.second < b.second;
}

// The two rooms a doorway connects, read from the room map around it.
std::pair<int, int> door_rooms(const WorldState& w, gridworld::Pos p, gridworld::Pos* n1,
                               gridworld::Pos* n2) {
  int rooms[2] = {-1, -1};
  gridworld::Pos cells[2];
  int count = 0;
  const gridworld::Pos deltas[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& d : deltas) {
    const int nx = p.x + d.x, ny = p.y + d.y;
    if (!w.in_bounds(nx, ny)) continue;
    const int r = w.room_at(nx, ny);
    if (r >= 0 && count < 2) {
      rooms[count] = r;
      cells[count] = {nx, ny};
      ++count;
    }
  }
  if (n1) *n1 = cells[0];
  if (n2) *n2 = cells[1];
  return {rooms[0], rooms[1]};
}

int leads_to_room(const WorldState& w, gridworld::Pos door) {
  gridworld::Pos c1, c2;
  const auto [r1, r2] = door_rooms(w, door, &c1, &c2);
  if (r2 < 0) return r1;
  if (w.agent_room == r1) return r2;
  if (w.agent_room == r2) return r1;
  const int d1 = std::abs(c1.x - w.agent_pos.x) + std::abs(c1.y - w.agent_pos.y);
  const int d2 = std::abs(c2.x - w.agent_pos.x) + std::abs(c2.y - w.agent_pos.y);
  if (d1 != d2) return d1 > d2 ? r1 : r2;
  return std::min(r1, r2);
}

}  // namespace

std::map<std::string, std::pair<int, int>> get_observation(const WorldState& w) {
  std::map<std::string, std::pair<int, int>> out;
  for (const auto& vc : gridworld::scan_view(w)) {
    if (!vc.visible || !vc.in_grid) continue;
    const auto& cell = w.at(vc.abs.x, vc.abs.y);
    if (cell.kind != CellKind::Ball && cell.kind != CellKind::Box && cell.kind != CellKind::Key)
      continue;
    const std::string name = gridworld::object_name(cell.kind, cell.color);
    const std::pair<int, int> pos{vc.rel_x, vc.rel_y};
    auto it = out.find(name);
    if (it == out.end() || closer(pos, it->second)) out[name] = pos;
  }
  return out;
}

std::optional<std::string> get_carried(const WorldState& w) {
  if (!w.carried) return std::nullopt;
  return gridworld::object_name(w.carried->kind, w.carried->color);
}

std::map<std::string, DoorInfo> get_doors_in_observation(const WorldState& w) {
  std::map<std::string, DoorInfo> out;
  for (const auto& vc : gridworld::scan_view(w)) {
    if (!vc.visible || !vc.in_grid) continue;
    const auto& cell = w.at(vc.abs.x, vc.abs.y);
    if (cell.kind != CellKind::Door) continue;
    DoorInfo info;
    info.x = vc.rel_x;
    info.y = vc.rel_y;
    info.status = cell.door == gridworld::DoorState::Open ? 0 : 1;
    info.room_id = leads_to_room(w, vc.abs);
    const std::string name = gridworld::door_name(cell.color);
    auto it = out.find(name);
    if (it == out.end() || closer({info.x, info.y}, {it->second.x, it->second.y})) out[name] = info;
  }
  return out;
}

int get_current_room(const WorldState& w) { return w.agent_room; }

std::vector<int> get_visited_rooms(const VisitLog& log) { return log.visited(); }

void flush(VisitLog& log) { log.flush(); }

PerceptionSnapshot make_snapshot(const WorldState& w, const std::vector<int>& visited_pre_entry,
                                 int current_room) {
  PerceptionSnapshot snap;
  snap.objects = get_observation(w);
  snap.carried = get_carried(w);
  snap.doors = get_doors_in_observation(w);
  snap.visited_rooms = visited_pre_entry;
  snap.current_room = current_room;
  return snap;
}

nlohmann::json PerceptionSnapshot::to_json() const {
  nlohmann::json j;
  j["objects"] = nlohmann::json::object();
  for (const auto& [name, pos] : objects) j["objects"][name] = {pos.first, pos.second};
  j["carried"] = carried ? nlohmann::json(*carried) : nlohmann::json(nullptr);
  j["doors"] = nlohmann::json::object();
  for (const auto& [name, d] : doors) j["doors"][name] = {d.x, d.y, d.status, d.room_id};
  j["visited_rooms"] = visited_rooms;
  j["current_room"] = current_room;
  return j;
}

EpisodeContext::EpisodeContext(gridworld::WorldState w) : world_(std::move(w)), log_(world_.agent_room) {
  log_.set_current(world_.agent_room);
  last_snapshot_ = make_snapshot(world_, log_.visited(), world_.agent_room);
}

gridworld::ActionOutcome EpisodeContext::apply(gridworld::Action a) {
  const auto outcome = gridworld::apply(world_, a);
  const int room = world_.agent_room;
  last_snapshot_ = make_snapshot(world_, log_.visited(), room);
  log_.set_current(room);
  return outcome;
}

PerceptionSnapshot EpisodeContext::current_snapshot() const {
  return make_snapshot(world_, log_.visited(), log_.current());
}

void EpisodeContext::flush_log() {
  log_.flush();
  last_snapshot_ = current_snapshot();
}

}  // namespace sdg::perception
