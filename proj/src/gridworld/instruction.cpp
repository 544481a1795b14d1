#include "sdg/gridworld/instruction.hpp"

#include <algorithm>
#include <sstream>

#include "sdg/common/rng.hpp"

namespace sdg::gridworld {

LevelSpec default_level_spec(Level level) {
  switch (level) {
    case Level::GoToLocal: return {level, MapKind::SingleRoom, 7};
    case Level::PickupLoc: return {level, MapKind::SingleRoom, 7};
    case Level::PutNextLocal: return {level, MapKind::SingleRoom, 4};
    case Level::Open: return {level, MapKind::Rooms3x3, 4};
    case Level::SynthSeq: return {level, MapKind::Rooms3x3, 5};
    case Level::BossLevel: return {level, MapKind::Rooms3x3, 5};
  }
  return {Level::GoToLocal, MapKind::SingleRoom, 7};
}

std::string_view level_name(Level level) {
  switch (level) {
    case Level::GoToLocal: return "GoToLocal";
    case Level::PickupLoc: return "PickupLoc";
    case Level::PutNextLocal: return "PutNextLocal";
    case Level::Open: return "Open";
    case Level::SynthSeq: return "SynthSeq";
    case Level::BossLevel: return "BossLevel";
  }
  return "GoToLocal";
}

std::optional<Level> level_from_name(std::string_view name) {
  for (Level l : {Level::GoToLocal, Level::PickupLoc, Level::PutNextLocal, Level::Open,
                  Level::SynthSeq, Level::BossLevel}) {
    if (name == level_name(l)) return l;
  }
  return std::nullopt;
}

namespace {

bool desc_matches(const Cell& c, const ObjDesc& d) {
  return c.kind == d.kind && c.color == d.color;
}

bool adjacent(Pos a, Pos b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1;
}

}  // namespace

bool atom_satisfied(const WorldState& w, const GoalAtom& atom) {
  switch (atom.kind) {
    case AtomKind::GoTo: {
      for (int y = 0; y < w.height; ++y)
        for (int x = 0; x < w.width; ++x)
          if (desc_matches(w.at(x, y), atom.a) && adjacent(w.agent_pos, {x, y})) return true;
      return false;
    }
    case AtomKind::Pickup:
      return w.carried && w.carried->kind == atom.a.kind && w.carried->color == atom.a.color;
    case AtomKind::PutNext: {
      for (int y = 0; y < w.height; ++y)
        for (int x = 0; x < w.width; ++x) {
          if (!desc_matches(w.at(x, y), atom.a)) continue;
          const Pos p{x, y};
          const Pos deltas[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
          for (const Pos& d : deltas) {
            const int nx = p.x + d.x, ny = p.y + d.y;
            if (w.in_bounds(nx, ny) && desc_matches(w.at(nx, ny), atom.b)) return true;
          }
        }
      return false;
    }
    case AtomKind::Open: {
      for (const Cell& c : w.grid)
        if (c.kind == CellKind::Door && c.color == atom.a.color && c.door == DoorState::Open)
          return true;
      return false;
    }
  }
  return false;
}

TaskJudge::TaskJudge(const GoalPredicate& goal) : goal_(goal) {}

void TaskJudge::on_step(const WorldState& w) {
  // Atoms of the first incomplete rank are eligible; completing it within this
  // step lets the next rank record against the same state.
  bool progressed = true;
  while (progressed) {
    progressed = false;
    int eligible_rank = -1;
    for (size_t i = 0; i < goal_.atoms.size(); ++i) {
      if (!(mask_ & (1ull << i))) {
        const int r = goal_.atoms[i].rank;
        if (eligible_rank < 0 || r < eligible_rank) eligible_rank = r;
      }
    }
    if (eligible_rank < 0) return;
    for (size_t i = 0; i < goal_.atoms.size(); ++i) {
      if (mask_ & (1ull << i)) continue;
      if (goal_.atoms[i].rank != eligible_rank) continue;
      if (atom_satisfied(w, goal_.atoms[i])) {
        mask_ |= 1ull << i;
        progressed = true;
      }
    }
    if (progressed) {
      // Only cascade to the next rank if this one fully completed.
      for (size_t i = 0; i < goal_.atoms.size(); ++i) {
        if (goal_.atoms[i].rank == eligible_rank && !(mask_ & (1ull << i))) return;
      }
    }
  }
}

bool TaskJudge::succeeded() const {
  for (size_t i = 0; i < goal_.atoms.size(); ++i)
    if (!(mask_ & (1ull << i))) return false;
  return true;
}

bool task_success(const WorldState& w, const InstructionTask& task) {
  TaskJudge judge(task.goal);
  judge.on_step(w);
  return judge.succeeded();
}

double env_reward(bool success, int steps, int horizon) {
  if (!success) return 0.0;
  return 1.0 - 0.9 * (static_cast<double>(steps) / static_cast<double>(horizon));
}

// --- instruction text -------------------------------------------------------

std::string atom_object_phrase(const ObjDesc& d) {
  if (d.kind == CellKind::Door) return door_name(d.color);
  return object_name(d.kind, d.color);
}

namespace {

const char* qualifier_phrase(LocQualifier q) {
  switch (q) {
    case LocQualifier::Left: return " on your left";
    case LocQualifier::Right: return " on your right";
    case LocQualifier::Front: return " in front of you";
    case LocQualifier::Behind: return " behind you";
  }
  return "";
}

std::string atom_text(const GoalAtom& atom) {
  std::string qual = atom.qualifier ? qualifier_phrase(*atom.qualifier) : "";
  switch (atom.kind) {
    case AtomKind::GoTo:
      return "go to the " + atom_object_phrase(atom.a) + qual;
    case AtomKind::Pickup:
      return "pick up the " + atom_object_phrase(atom.a) + qual;
    case AtomKind::PutNext:
      return "put the " + atom_object_phrase(atom.a) + qual + " next to the " +
             atom_object_phrase(atom.b);
    case AtomKind::Open:
      return "open a " + door_name(atom.a.color);
  }
  return "";
}

std::vector<std::vector<const GoalAtom*>> rank_groups(const GoalPredicate& goal) {
  std::vector<std::vector<const GoalAtom*>> groups;
  int current = -1;
  for (const GoalAtom& a : goal.atoms) {
    if (groups.empty() || a.rank != current) {
      groups.emplace_back();
      current = a.rank;
    }
    groups.back().push_back(&a);
  }
  return groups;
}

std::string join_group(const std::vector<const GoalAtom*>& group) {
  std::string out;
  for (size_t i = 0; i < group.size(); ++i) {
    if (i > 0) out += " and ";
    out += atom_text(*group[i]);
  }
  return out;
}

// Atom parsing helpers. Object phrases are "<color> <type>" or "<color> door"
// with an optional article and location-qualifier suffix.
struct PhraseResult {
  ObjDesc desc;
  std::optional<LocQualifier> qualifier;
};

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(' ');
  size_t e = s.find_last_not_of(' ');
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::string drop_article(const std::string& s) {
  if (s.rfind("the ", 0) == 0) return s.substr(4);
  if (s.rfind("a ", 0) == 0) return s.substr(2);
  return s;
}

PhraseResult parse_object_phrase(std::string text, const std::string& instruction) {
  PhraseResult out;
  text = strip(text);
  const std::pair<const char*, LocQualifier> quals[] = {
      {" on your left", LocQualifier::Left},
      {" on your right", LocQualifier::Right},
      {" in front of you", LocQualifier::Front},
      {" behind you", LocQualifier::Behind},
  };
  for (const auto& [suffix, q] : quals) {
    const std::string suf(suffix);
    if (text.size() > suf.size() && text.compare(text.size() - suf.size(), suf.size(), suf) == 0) {
      out.qualifier = q;
      text = strip(text.substr(0, text.size() - suf.size()));
      break;
    }
  }
  text = drop_article(text);
  const size_t space = text.find(' ');
  if (space == std::string::npos)
    throw UnparsableInstruction("cannot parse object phrase in: " + instruction);
  const std::string color_word = text.substr(0, space);
  const std::string kind_word = strip(text.substr(space + 1));
  const auto color = color_from_name(color_word);
  if (!color) throw UnparsableInstruction("unknown color '" + color_word + "' in: " + instruction);
  out.desc.color = *color;
  if (kind_word == "door") {
    out.desc.kind = CellKind::Door;
  } else {
    const auto kind = object_kind_from_name(kind_word);
    if (!kind) throw UnparsableInstruction("unknown object '" + kind_word + "' in: " + instruction);
    out.desc.kind = *kind;
  }
  return out;
}

GoalAtom parse_atom(std::string text, const std::string& instruction) {
  text = strip(text);
  GoalAtom atom;
  if (text.rfind("go to ", 0) == 0) {
    atom.kind = AtomKind::GoTo;
    const PhraseResult p = parse_object_phrase(text.substr(6), instruction);
    if (p.desc.kind == CellKind::Door)
      throw UnparsableInstruction("go-to targets an object, not a door: " + instruction);
    atom.a = p.desc;
    atom.qualifier = p.qualifier;
    return atom;
  }
  if (text.rfind("pick up ", 0) == 0) {
    atom.kind = AtomKind::Pickup;
    const PhraseResult p = parse_object_phrase(text.substr(8), instruction);
    if (p.desc.kind == CellKind::Door)
      throw UnparsableInstruction("cannot pick up a door: " + instruction);
    atom.a = p.desc;
    atom.qualifier = p.qualifier;
    return atom;
  }
  if (text.rfind("put ", 0) == 0) {
    const size_t next_to = text.find(" next to ");
    if (next_to == std::string::npos)
      throw UnparsableInstruction("put atom without 'next to': " + instruction);
    atom.kind = AtomKind::PutNext;
    const PhraseResult a = parse_object_phrase(text.substr(4, next_to - 4), instruction);
    const PhraseResult b = parse_object_phrase(text.substr(next_to + 9), instruction);
    if (a.desc.kind == CellKind::Door || b.desc.kind == CellKind::Door)
      throw UnparsableInstruction("put atom references a door: " + instruction);
    atom.a = a.desc;
    atom.b = b.desc;
    atom.qualifier = a.qualifier;
    return atom;
  }
  if (text.rfind("open ", 0) == 0) {
    atom.kind = AtomKind::Open;
    const PhraseResult p = parse_object_phrase(text.substr(5), instruction);
    if (p.desc.kind != CellKind::Door)
      throw UnparsableInstruction("open atom must reference a door: " + instruction);
    atom.a = p.desc;
    return atom;
  }
  throw UnparsableInstruction("unrecognized atom '" + text + "' in: " + instruction);
}

std::vector<std::string> split_all(const std::string& text, const std::string& sep) {
  std::vector<std::string> parts;
  size_t pos = 0;
  while (true) {
    const size_t hit = text.find(sep, pos);
    if (hit == std::string::npos) {
      parts.push_back(text.substr(pos));
      return parts;
    }
    parts.push_back(text.substr(pos, hit - pos));
    pos = hit + sep.size();
  }
}

}  // namespace

GoalPredicate parse_instruction(const std::string& text) {
  GoalPredicate goal;
  // "X after you Y" means Y first; split once and parse Y's ranks first.
  std::vector<std::string> ordered;
  const size_t after = text.find(" after you ");
  if (after != std::string::npos) {
    ordered.push_back(text.substr(after + 11));
    ordered.push_back(text.substr(0, after));
  } else {
    ordered.push_back(text);
  }
  int rank = 0;
  for (const std::string& part : ordered) {
    for (const std::string& seq : split_all(part, ", then ")) {
      for (const std::string& atom_text : split_all(seq, " and ")) {
        GoalAtom atom = parse_atom(atom_text, text);
        atom.rank = rank;
        goal.atoms.push_back(atom);
      }
      ++rank;
    }
  }
  if (goal.atoms.empty()) throw UnparsableInstruction("empty instruction");
  return goal;
}

std::string instruction_text(const GoalPredicate& goal, uint64_t surface_seed) {
  const auto groups = rank_groups(goal);
  if (groups.size() == 1) return join_group(groups[0]);
  Rng rng(surface_seed);
  if (groups.size() == 2 && rng.uniform() < 0.5) {
    // Surface form with reversed clause order.
    return join_group(groups[1]) + " after you " + join_group(groups[0]);
  }
  std::string out = join_group(groups[0]);
  for (size_t i = 1; i < groups.size(); ++i) out += ", then " + join_group(groups[i]);
  return out;
}

}  // namespace sdg::gridworld
