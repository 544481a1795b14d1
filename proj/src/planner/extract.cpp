#include "sdg/planner/extract.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <regex>
#include <sstream>
#include <vector>

#include "sdg/checkdsl/checkdsl.hpp"
#include "sdg/deduction/parser.hpp"
#include "sdg/deduction/program.hpp"

namespace sdg::planner {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Recognizes "Goal N: body", "Goal N. body", "(N) body" headers.
std::optional<std::string> goal_header_body(const std::string& line) {
  const std::string t = trim(line);
  const std::string lt = lower(t);
  std::size_t i = 0;
  if (lt.rfind("goal ", 0) == 0) {
    i = 5;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i == 5) return std::nullopt;
    if (i < t.size() && (t[i] == ':' || t[i] == '.')) ++i;
    return trim(t.substr(i));
  }
  if (!t.empty() && t[0] == '(') {
    i = 1;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i > 1 && i < t.size() && t[i] == ')') return trim(t.substr(i + 1));
  }
  return std::nullopt;
}

void append_atom(std::vector<std::string>& atoms, std::string atom) {
  if (std::find(atoms.begin(), atoms.end(), atom) == atoms.end()) atoms.push_back(std::move(atom));
}

}  // namespace

std::optional<std::string> translate_check_code(const std::string& code) {
  std::vector<std::string> atoms;
  std::string rest = code;

  static const std::regex kObjAdj(
      R"rx(sum\(abs\(\s*\w+\[\s*"([^"]+)"\s*\]\s*-\s*\w+\[\s*"([^"]+)"\s*\]\s*\)\)\s*==\s*1)rx");
  static const std::regex kNextTo(R"rx(sum\(abs\(\s*\w+\[\s*"([^"]+)"\s*\]\s*\)\)\s*==\s*1)rx");
  static const std::regex kDoorStatus(R"rx(\w+\[\s*"([^"]+)"\s*\]\[\s*2\s*\]\s*==\s*([01]))rx");
  static const std::regex kCarriedEq(R"rx(get_(?:carried|picked)\(\)\s*==\s*"([^"]+)")rx");
  static const std::regex kCarriedIn(R"rx("([^"]+)"\s+in\s+\w+\.get_(?:carried|picked)\(\))rx");
  static const std::regex kMembership(R"rx("([^"]+)"\s+(not\s+)?in\s+[\w.]+(?:\(\))?\.keys\(\))rx");

  auto take_all = [&rest](const std::regex& re, auto&& fn) {
    std::string next;
    auto begin = std::sregex_iterator(rest.begin(), rest.end(), re);
    std::size_t last = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      fn(*it);
      next += rest.substr(last, static_cast<std::size_t>(it->position()) - last);
      last = static_cast<std::size_t>(it->position() + it->length());
    }
    next += rest.substr(last);
    rest = std::move(next);
  };

  take_all(kObjAdj, [&](const std::smatch& m) {
    append_atom(atoms, "obj_adj(\"" + m[1].str() + "\", \"" + m[2].str() + "\")rx");
  });
  take_all(kNextTo,
           [&](const std::smatch& m) { append_atom(atoms, "next_to(\"" + m[1].str() + "\")rx"); });
  take_all(kDoorStatus, [&](const std::smatch& m) {
    append_atom(atoms, (m[2].str() == "0" ? "door_open(\"" : "door_closed(\"") + m[1].str() +
                           "\")rx");
  });
  take_all(kCarriedEq,
           [&](const std::smatch& m) { append_atom(atoms, "carried(\"" + m[1].str() + "\")rx"); });
  take_all(kCarriedIn,
           [&](const std::smatch& m) { append_atom(atoms, "carried(\"" + m[1].str() + "\")rx"); });

  // Visited-room scans: distinguishing marker is whether the current room or a
  // door's destination room is tested against the visited list.
  if (rest.find("get_visited_rooms") != std::string::npos &&
      rest.find("not in") != std::string::npos) {
    if (rest.find("get_current_room") != std::string::npos ||
        rest.find("current_room") != std::string::npos) {
      append_atom(atoms, "in_unvisited_room()rx");
    } else if (rest.find("get_doors_in_observation") != std::string::npos ||
               rest.find("room_id") != std::string::npos || rest.find("[3]") != std::string::npos) {
      append_atom(atoms, "unexplored_door_visible()rx");
    }
  }

  std::vector<std::pair<std::string, bool>> memberships;  // (name, negated)
  take_all(kMembership, [&](const std::smatch& m) {
    memberships.emplace_back(m[1].str(), m[2].matched);
  });
  for (const auto& [name, negated] : memberships) {
    // A positive membership is implied by an adjacency/door test on the same
    // object; skip it to keep the extracted condition minimal.
    const bool subsumed =
        !negated && std::any_of(atoms.begin(), atoms.end(), [&name](const std::string& a) {
          return a.find('"' + name + '"') != std::string::npos;
        });
    if (!subsumed)
      append_atom(atoms, (negated ? "not in_obs(\"" : "in_obs(\"") + name + "\")rx");
  }

  // "return True if observation else False" — an unconditional visibility
  // probe with no named object; degenerates to the constant.
  if (atoms.empty() && std::regex_search(rest, std::regex(R"rx(True\s+if\s+\w+\s+else\s+False)rx")))
    atoms.push_back("true");

  if (atoms.empty()) return std::nullopt;
  std::string out = atoms[0];
  for (std::size_t i = 1; i < atoms.size(); ++i) out += " and " + atoms[i];
  return out;
}

Decomposition extract_decomposition(const std::string& instruction, const std::string& content) {
  struct Draft {
    std::string body;
    std::string check_text;  // explicit "check:" line
    std::string code;        // accumulated code lines
  };
  std::vector<Draft> drafts;
  bool in_fence = false;
  for (const std::string& raw : split_lines(content)) {
    const std::string t = trim(raw);
    if (t.rfind("```", 0) == 0) {
      in_fence = !in_fence;
      continue;
    }
    if (!in_fence) {
      if (auto body = goal_header_body(raw)) {
        drafts.push_back({*body, "", ""});
        continue;
      }
      const std::string lt = lower(t);
      if (lt.rfind("check:", 0) == 0 && !drafts.empty()) {
        drafts.back().check_text = trim(t.substr(6));
        continue;
      }
    }
    if (!drafts.empty()) drafts.back().code += raw + "\n";
  }
  if (drafts.empty()) throw FormatError("reply contains no \"Goal N:\" lines");

  Decomposition out;
  out.instruction = instruction;
  for (const Draft& d : drafts) {
    std::string check = d.check_text;
    if (check.empty())
      if (auto translated = translate_check_code(d.code)) check = *translated;
    if (check.empty()) {
      if (lower(d.body).find("repeat") != std::string::npos) continue;  // "Repeat from Goal 1"
      throw FormatError("goal has no recognizable check: " + d.body);
    }
    try {
      checkdsl::parse_check(check);
    } catch (const checkdsl::ParseError& e) {
      throw FormatError("goal check does not parse: " + std::string(e.what()));
    }
    Subgoal sg;
    sg.description = "Goal " + std::to_string(out.subgoals.size() + 1) + ": " + d.body;
    sg.check_source = check;
    sg.repeatable = lower(d.body).find("unexplored") != std::string::npos;
    out.subgoals.push_back(std::move(sg));
  }
  if (out.subgoals.empty()) throw FormatError("no goal with a usable check in reply");
  return out;
}

std::string extract_program_text(const std::string& content) {
  const std::vector<std::string> lines = split_lines(content);
  std::string candidate;
  bool in_fence = false;
  bool found_fence = false;
  for (const std::string& raw : lines) {
    const std::string t = trim(raw);
    if (t.rfind("```", 0) == 0) {
      if (in_fence) break;  // first fenced block only
      in_fence = true;
      found_fence = true;
      continue;
    }
    if (in_fence) candidate += raw + "\n";
  }
  if (!found_fence) {
    static const char* kKeywords[] = {"skill", "prim", "while", "if", "flush", "fail"};
    std::size_t start = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string t = trim(lines[i]);
      for (const char* kw : kKeywords) {
        const std::size_t n = std::strlen(kw);
        if (t.rfind(kw, 0) == 0 && (t.size() == n || !std::isalnum(static_cast<unsigned char>(t[n])))) {
          start = i;
          break;
        }
      }
      if (start != lines.size()) break;
    }
    if (start == lines.size()) throw FormatError("reply contains no program block");
    for (std::size_t i = start; i < lines.size(); ++i) candidate += lines[i] + "\n";
  }
  try {
    return print_program(deduction::parse_program(candidate));
  } catch (const deduction::ProgramParseError& e) {
    throw FormatError("extracted program does not parse: " + std::string(e.what()));
  }
}

ApiTranslation extract_api_call(const std::string& content) {
  static const std::regex kCall(R"rx(^\s*([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\s*[.;]?\s*$)rx");
  for (const std::string& raw : split_lines(content)) {
    std::string line = trim(raw);
    if (line.rfind("robot.", 0) == 0) line = line.substr(6);
    std::smatch m;
    if (!std::regex_match(line, m, kCall)) continue;
    ApiTranslation out;
    out.api = m[1].str();
    if (out.api == "go_next_to_door") out.api = "go_to_door";
    const std::string args = m[2].str();
    std::size_t i = 0;
    while (i < args.size()) {
      const std::size_t open = args.find('"', i);
      if (open == std::string::npos) break;
      const std::size_t close = args.find('"', open + 1);
      if (close == std::string::npos) break;
      out.params.push_back(args.substr(open + 1, close - open - 1));
      i = close + 1;
    }
    checkdsl::canonical_check(out.api, out.params);  // vocabulary + arity validation
    return out;
  }
  throw FormatError("reply contains no API call: " + content);
}

}  // namespace sdg::planner
