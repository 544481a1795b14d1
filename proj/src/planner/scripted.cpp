#include "sdg/planner/scripted.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "sdg/checkdsl/checkdsl.hpp"
#include "sdg/deduction/parser.hpp"
#include "sdg/deduction/program.hpp"
#include "sdg/gridworld/instruction.hpp"
#include "sdg/planner/embedding.hpp"

namespace sdg::planner {

namespace {

using deduction::make_flush;
using deduction::make_if;
using deduction::make_skill;
using deduction::make_while;
using deduction::Program;
using deduction::Stmt;
using deduction::StmtPtr;

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Extracts "{color} {type}" phrases ("red ball", "grey door") in order.
std::vector<std::string> object_phrases(const std::string& lowered) {
  const std::vector<std::string> toks = words(lowered);
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (!gridworld::color_from_name(toks[i])) continue;
    const std::string& next = toks[i + 1];
    if (next == "door" || gridworld::object_kind_from_name(next))
      out.push_back(toks[i] + " " + next);
  }
  return out;
}

std::string check_source_for(const std::string& api, const std::vector<std::string>& params) {
  return checkdsl::print_check(checkdsl::canonical_check(api, params));
}

struct SubgoalDraft {
  std::string api;
  std::vector<std::string> params;
  std::string body;  // description after the ordinal marker
  bool repeatable = false;
};

void append_atom_subgoals(const gridworld::GoalAtom& atom, std::vector<SubgoalDraft>& out) {
  using gridworld::AtomKind;
  const std::string a = gridworld::atom_object_phrase(atom.a);
  switch (atom.kind) {
    case AtomKind::GoTo:
      out.push_back({"discover_object", {a}, "discover the " + a});
      out.push_back({"go_next_to", {a}, "go next to the " + a});
      break;
    case AtomKind::Pickup:
      out.push_back({"discover_object", {a}, "discover the " + a});
      out.push_back({"go_next_to", {a}, "go next to the " + a});
      out.push_back({"pick", {a}, "pick up the " + a});
      break;
    case AtomKind::PutNext: {
      const std::string b = gridworld::atom_object_phrase(atom.b);
      out.push_back({"discover_object", {a}, "discover the " + a});
      out.push_back({"go_next_to", {a}, "go next to the " + a});
      out.push_back({"pick", {a}, "pick up the " + a});
      out.push_back({"discover_object", {b}, "discover the " + b});
      out.push_back({"go_next_to", {b}, "go next to the " + b});
      out.push_back({"put_next_to", {a, b}, "put the " + a + " next to the " + b});
      break;
    }
    case AtomKind::Open:
      out.push_back({"find_unexplored_door", {}, "find an unexplored door", true});
      out.push_back({"enter_unexplored_room", {}, "enter the unexplored room", true});
      out.push_back({"discover_door", {a}, "discover the " + a});
      out.push_back({"go_to_door", {a}, "go to the " + a});
      out.push_back({"open_door", {a}, "open the " + a});
      break;
  }
}

// while not in_obs(P) { skill DISCOVER(P); if not in_obs(P) { find; enter } }
StmtPtr explore_while(const std::string& phrase, const std::string& discover_api) {
  checkdsl::ExprPtr seen = checkdsl::make_atom(checkdsl::CheckExpr::Kind::InObs, phrase);
  std::vector<StmtPtr> fallback{make_skill("find_unexplored_door"),
                                make_skill("enter_unexplored_room")};
  std::vector<StmtPtr> body{make_skill(discover_api, {phrase}),
                            make_if(seen, true, std::move(fallback))};
  return make_while(seen, std::move(body));
}

void append_atom_program(const gridworld::GoalAtom& atom, Program& p) {
  using gridworld::AtomKind;
  const std::string a = gridworld::atom_object_phrase(atom.a);
  auto discover_then_flush = [&p](const std::string& phrase, const std::string& discover_api) {
    p.stmts.push_back(explore_while(phrase, discover_api));
    p.stmts.push_back(make_flush());
  };
  switch (atom.kind) {
    case AtomKind::GoTo:
      discover_then_flush(a, "discover_object");
      p.stmts.push_back(make_skill("go_next_to", {a}));
      break;
    case AtomKind::Pickup:
      discover_then_flush(a, "discover_object");
      p.stmts.push_back(make_skill("go_next_to", {a}));
      p.stmts.push_back(make_skill("pick", {a}));
      break;
    case AtomKind::PutNext: {
      const std::string b = gridworld::atom_object_phrase(atom.b);
      discover_then_flush(a, "discover_object");
      p.stmts.push_back(make_skill("go_next_to", {a}));
      p.stmts.push_back(make_skill("pick", {a}));
      discover_then_flush(b, "discover_object");
      p.stmts.push_back(make_skill("go_next_to", {b}));
      p.stmts.push_back(make_skill("put_next_to", {a, b}));
      break;
    }
    case AtomKind::Open:
      discover_then_flush(a, "discover_door");
      p.stmts.push_back(make_skill("go_to_door", {a}));
      p.stmts.push_back(make_skill("open_door", {a}));
      break;
  }
}

// --- debugging ---------------------------------------------------------------

struct FailingCall {
  std::string api;
  std::vector<std::string> params;
  std::vector<int> path;  // may be empty if the message carried none
};

// Pulls `skill name("p"[, "p"])` and `at statement i.j.k` out of an error
// message produced by the runtime.
std::optional<FailingCall> parse_error_message(const std::string& msg) {
  const std::size_t at = msg.find("skill ");
  if (at == std::string::npos) return std::nullopt;
  FailingCall out;
  std::size_t i = at + 6;
  while (i < msg.size() && (std::isalnum(static_cast<unsigned char>(msg[i])) || msg[i] == '_'))
    out.api += msg[i++];
  if (out.api.empty()) return std::nullopt;
  if (i < msg.size() && msg[i] == '(') {
    const std::size_t close = msg.find(')', i);
    std::size_t q = i;
    while (true) {
      const std::size_t open_quote = msg.find('"', q);
      if (open_quote == std::string::npos || (close != std::string::npos && open_quote > close))
        break;
      const std::size_t end_quote = msg.find('"', open_quote + 1);
      if (end_quote == std::string::npos) break;
      out.params.push_back(msg.substr(open_quote + 1, end_quote - open_quote - 1));
      q = end_quote + 1;
    }
  }
  const std::size_t sp = msg.find("at statement ");
  if (sp != std::string::npos) {
    std::size_t j = sp + 13;
    int cur = -1;
    while (j < msg.size() && (std::isdigit(static_cast<unsigned char>(msg[j])) || msg[j] == '.')) {
      if (msg[j] == '.') {
        if (cur >= 0) out.path.push_back(cur);
        cur = -1;
      } else {
        cur = (cur < 0 ? 0 : cur * 10) + (msg[j] - '0');
      }
      ++j;
    }
    if (cur >= 0) out.path.push_back(cur);
  }
  return out;
}

void flatten_stmts(const std::vector<StmtPtr>& list, std::vector<int>& prefix,
                   std::vector<std::pair<std::vector<int>, StmtPtr>>& out) {
  for (int i = 0; i < static_cast<int>(list.size()); ++i) {
    prefix.push_back(i);
    out.emplace_back(prefix, list[i]);
    const StmtPtr& s = list[i];
    if (s->kind == Stmt::Kind::While) {
      flatten_stmts(s->body, prefix, out);
    } else if (s->kind == Stmt::Kind::If) {
      // Match locate_stmt's combined child view: then-branch, then else.
      std::vector<StmtPtr> combined = s->body;
      combined.insert(combined.end(), s->else_body.begin(), s->else_body.end());
      flatten_stmts(combined, prefix, out);
    }
    prefix.pop_back();
  }
}

std::vector<std::pair<std::vector<int>, StmtPtr>> flatten_program(const Program& p) {
  std::vector<std::pair<std::vector<int>, StmtPtr>> out;
  std::vector<int> prefix;
  flatten_stmts(p.stmts, prefix, out);
  return out;
}

bool same_call(const Stmt& s, const FailingCall& f) {
  return s.kind == Stmt::Kind::Skill && s.name == f.api &&
         (f.params.empty() || s.params == f.params);
}

}  // namespace

Decomposition ScriptedPlanner::decompose(const std::string& instruction) {
  const gridworld::GoalPredicate goal = gridworld::parse_instruction(instruction);
  std::vector<SubgoalDraft> drafts;
  for (const auto& atom : goal.atoms) append_atom_subgoals(atom, drafts);
  Decomposition out;
  out.instruction = instruction;
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    Subgoal sg;
    sg.description = "Goal " + std::to_string(i + 1) + ": " + drafts[i].body;
    sg.check_source = check_source_for(drafts[i].api, drafts[i].params);
    sg.repeatable = drafts[i].repeatable;
    out.subgoals.push_back(std::move(sg));
  }
  return out;
}

ApiTranslation ScriptedPlanner::translate_api(const std::string& subgoal_description) {
  std::string text = lower(subgoal_description);
  // Drop the "goal n:" ordinal marker if present.
  if (text.rfind("goal ", 0) == 0) {
    const std::size_t colon = text.find(':');
    if (colon != std::string::npos) text = text.substr(colon + 1);
  }
  const std::vector<std::string> phrases = object_phrases(text);
  auto require = [&](std::size_t n) {
    if (phrases.size() < n)
      throw checkdsl::UnknownApiError("cannot extract " + std::to_string(n) +
                                      " object parameter(s) from: " + subgoal_description);
  };
  auto has = [&](const char* needle) { return text.find(needle) != std::string::npos; };

  if (has("unexplored door")) return {"find_unexplored_door", {}};
  if (has("unexplored room")) return {"enter_unexplored_room", {}};
  if (has("put ") && has(" next to ")) {
    require(2);
    return {"put_next_to", {phrases[0], phrases[1]}};
  }
  if (has("pick")) {
    require(1);
    return {"pick", {phrases[0]}};
  }
  if (has("go next to")) {
    require(1);
    return {"go_next_to", {phrases[0]}};
  }
  if (has("discover")) {
    require(1);
    const bool door = phrases[0].size() > 4 && phrases[0].ends_with("door");
    return {door ? "discover_door" : "discover_object", {phrases[0]}};
  }
  if (has("go to")) {
    require(1);
    const bool door = phrases[0].ends_with("door");
    return {door ? "go_to_door" : "go_next_to", {phrases[0]}};
  }
  if (has("open")) {
    require(1);
    return {"open_door", {phrases[0]}};
  }
  throw checkdsl::UnknownApiError("cannot translate subgoal: " + subgoal_description);
}

EmbeddingVector ScriptedPlanner::embed(const std::string& text) {
  return {trigram_embedding(text), "scripted"};
}

std::string ScriptedPlanner::generate_program(const std::string& instruction,
                                              const std::string& skill_api_docs) {
  (void)skill_api_docs;  // baked into the templates for the scripted backend
  gridworld::GoalPredicate goal;
  try {
    goal = gridworld::parse_instruction(instruction);
  } catch (const gridworld::UnparsableInstruction& e) {
    throw EmptyProgram(std::string("no program template applies: ") + e.what());
  }
  Program p;
  for (const auto& atom : goal.atoms) append_atom_program(atom, p);
  if (p.stmts.empty()) throw EmptyProgram("instruction produced no statements: " + instruction);
  return print_program(p);
}

std::string ScriptedPlanner::debug_program(const std::string& instruction,
                                           const std::string& program_text,
                                           const std::string& error_message) {
  (void)instruction;
  Program prog;
  try {
    prog = deduction::parse_program(program_text);
  } catch (const deduction::ProgramParseError& e) {
    throw NoFixAvailable(std::string("candidate program does not parse: ") + e.what());
  }
  const std::optional<FailingCall> failing = parse_error_message(error_message);
  if (!failing) throw NoFixAvailable("error message names no skill call: " + error_message);

  // Locate the failing statement: trust the reported path, else first match.
  auto flat = flatten_program(prog);
  std::vector<int> path = failing->path;
  deduction::StmtLocation loc;
  if (!path.empty()) {
    loc = deduction::locate_stmt(prog, path);
    if (loc.stmt && !same_call(*loc.stmt, *failing)) loc = {};
  }
  if (!loc.stmt) {
    for (const auto& [p, s] : flat)
      if (same_call(*s, *failing)) {
        path = p;
        loc = deduction::locate_stmt(prog, p);
        break;
      }
  }
  if (!loc.stmt) throw NoFixAvailable("failing call not found in program: " + error_message);

  const std::string& api = failing->api;
  const bool door_api = api == "discover_door" || api == "go_to_door" || api == "open_door";

  // Rule 1: a failing discover outside any loop gets wrapped in an explore loop.
  if (api == "discover_object" || api == "discover_door") {
    if (path.size() == 1) {
      const std::string phrase = loc.stmt->params.empty() ? "" : loc.stmt->params[0];
      if (!phrase.empty()) {
        (*loc.list)[loc.index] = explore_while(phrase, api);
        loc.list->insert(loc.list->begin() + loc.index + 1, make_flush());
        return print_program(prog);
      }
    }
    throw NoFixAvailable("discover already runs inside an explore loop: " + error_message);
  }

  // Flattened DFS order approximates execution-text order for "happens before".
  auto index_of_path = [&flat](const std::vector<int>& p) {
    for (std::size_t i = 0; i < flat.size(); ++i)
      if (flat[i].first == p) return static_cast<long>(i);
    return static_cast<long>(flat.size());
  };
  const long fail_at = index_of_path(path);
  auto exists_before = [&](const std::string& want_api, const std::string& param) {
    for (long i = 0; i < fail_at; ++i) {
      const Stmt& s = *flat[static_cast<std::size_t>(i)].second;
      if (s.kind == Stmt::Kind::Skill && s.name == want_api && !s.params.empty() &&
          s.params[0] == param)
        return true;
    }
    return false;
  };

  // Rule 2: manipulation/navigation without a prior discover of the object.
  if (api == "go_next_to" || api == "pick" || door_api) {
    if (loc.stmt->params.empty())
      throw NoFixAvailable("failing call carries no parameter: " + error_message);
    const std::string& param = loc.stmt->params[0];
    const std::string discover_api = door_api ? "discover_door" : "discover_object";
    if (!exists_before(discover_api, param)) {
      loc.list->insert(loc.list->begin() + loc.index, make_skill(discover_api, {param}));
      return print_program(prog);
    }
    throw NoFixAvailable("object is already discovered before the failing call: " + error_message);
  }

  // Rule 3: put without a prior pick of the carried object.
  if (api == "put_next_to") {
    if (loc.stmt->params.size() < 2)
      throw NoFixAvailable("put call carries fewer than two parameters: " + error_message);
    const std::string& carried = loc.stmt->params[0];
    if (!exists_before("pick", carried)) {
      loc.list->insert(loc.list->begin() + loc.index, make_skill("pick", {carried}));
      return print_program(prog);
    }
    throw NoFixAvailable("pick already precedes the failing put: " + error_message);
  }

  throw NoFixAvailable("no debugging rule matches: " + error_message);
}

std::unique_ptr<Planner> make_scripted_planner() { return std::make_unique<ScriptedPlanner>(); }

}  // namespace sdg::planner
