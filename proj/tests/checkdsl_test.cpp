#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdg/checkdsl/checkdsl.hpp"
#include "sdg/common/rng.hpp"

using sdg::Rng;
using sdg::checkdsl::CheckExpr;
using sdg::checkdsl::ExprPtr;
using sdg::perception::DoorInfo;
using sdg::perception::PerceptionSnapshot;
namespace dsl = sdg::checkdsl;

namespace {

// Reference evaluator: a literal transcription of the documented atom
// semantics, written table-first so a bug in the production tree walk cannot
// hide here by construction.
std::optional<std::pair<int, int>> ref_find(const PerceptionSnapshot& s, const std::string& n) {
  if (auto it = s.objects.find(n); it != s.objects.end()) return it->second;
  if (auto it = s.doors.find(n); it != s.doors.end()) return std::pair{it->second.x, it->second.y};
  return std::nullopt;
}

bool ref_eval(const ExprPtr& e, const PerceptionSnapshot& s) {
  const auto visited = [&](int room) {
    return std::count(s.visited_rooms.begin(), s.visited_rooms.end(), room) > 0;
  };
  switch (e->kind) {
    case CheckExpr::Kind::True:
      return true;
    case CheckExpr::Kind::False:
      return false;
    case CheckExpr::Kind::And:
      return ref_eval(e->lhs, s) && ref_eval(e->rhs, s);
    case CheckExpr::Kind::Or:
      return ref_eval(e->lhs, s) || ref_eval(e->rhs, s);
    case CheckExpr::Kind::Not:
      return !ref_eval(e->lhs, s);
    case CheckExpr::Kind::InObs:
      return s.objects.count(e->name) + s.doors.count(e->name) > 0;
    case CheckExpr::Kind::NextTo: {
      const auto p = ref_find(s, e->name);
      return p && std::abs(p->first) + std::abs(p->second) == 1;
    }
    case CheckExpr::Kind::Carried:
      return s.carried.has_value() && *s.carried == e->name;
    case CheckExpr::Kind::ObjAdj: {
      const auto p = ref_find(s, e->name);
      const auto q = ref_find(s, e->name2);
      return p && q && std::abs(p->first - q->first) + std::abs(p->second - q->second) == 1;
    }
    case CheckExpr::Kind::DoorOpen: {
      const auto it = s.doors.find(e->name);
      return it != s.doors.end() && it->second.status == 0;
    }
    case CheckExpr::Kind::DoorClosed: {
      const auto it = s.doors.find(e->name);
      return it != s.doors.end() && it->second.status == 1;
    }
    case CheckExpr::Kind::UnexploredDoorVisible:
      return std::any_of(s.doors.begin(), s.doors.end(),
                         [&](const auto& kv) { return !visited(kv.second.room_id); });
    case CheckExpr::Kind::InUnvisitedRoom:
      return !visited(s.current_room);
    case CheckExpr::Kind::CurrentRoomIs:
      return s.current_room == e->room_id;
  }
  return false;
}

// Every snapshot in the enumerated family: two objects, one door, three
// carried states, four door states, three visit logs, two current rooms.
std::vector<PerceptionSnapshot> snapshot_family() {
  const std::vector<std::optional<std::pair<int, int>>> obj_slots = {
      std::nullopt, std::pair{0, 1}, std::pair{1, 1}};
  const std::vector<std::optional<std::string>> carried_slots = {std::nullopt, "red ball",
                                                                 "blue key"};
  const std::vector<std::optional<DoorInfo>> door_slots = {
      std::nullopt, DoorInfo{0, 1, 0, 1}, DoorInfo{2, 1, 1, 1}, DoorInfo{-1, 0, 0, 2}};
  const std::vector<std::vector<int>> visit_slots = {{0}, {0, 1}, {0, 1, 2}};

  std::vector<PerceptionSnapshot> out;
  for (const auto& ball : obj_slots)
    for (const auto& key : obj_slots)
      for (const auto& carried : carried_slots)
        for (const auto& door : door_slots)
          for (const auto& visited : visit_slots)
            for (int room : {0, 1}) {
              PerceptionSnapshot s;
              if (ball) s.objects["red ball"] = *ball;
              if (key) s.objects["blue key"] = *key;
              s.carried = carried;
              if (door) s.doors["green door"] = *door;
              s.visited_rooms = visited;
              s.current_room = room;
              out.push_back(std::move(s));
            }
  return out;
}

const std::vector<std::string> kNames = {"red ball", "blue key", "green door"};

ExprPtr random_atom(Rng& rng) {
  switch (rng.uniform_int(0, 10)) {
    case 0: return dsl::make_atom(CheckExpr::Kind::InObs, kNames[rng.uniform_int(0, 2)]);
    case 1: return dsl::make_atom(CheckExpr::Kind::NextTo, kNames[rng.uniform_int(0, 2)]);
    case 2: return dsl::make_atom(CheckExpr::Kind::Carried, kNames[rng.uniform_int(0, 1)]);
    case 3:
      return dsl::make_atom(CheckExpr::Kind::ObjAdj, kNames[rng.uniform_int(0, 2)],
                            kNames[rng.uniform_int(0, 2)]);
    case 4: return dsl::make_atom(CheckExpr::Kind::DoorOpen, "green door");
    case 5: return dsl::make_atom(CheckExpr::Kind::DoorClosed, "green door");
    case 6: return dsl::make_atom(CheckExpr::Kind::UnexploredDoorVisible);
    case 7: return dsl::make_atom(CheckExpr::Kind::InUnvisitedRoom);
    case 8: return dsl::make_room_atom(rng.uniform_int(0, 2));
    case 9: return dsl::make_true();
    default: return dsl::make_false();
  }
}

ExprPtr random_expr(Rng& rng, int depth) {
  if (depth <= 0 || rng.uniform_int(0, 2) == 0) return random_atom(rng);
  switch (rng.uniform_int(0, 2)) {
    case 0: return dsl::make_and(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 1: return dsl::make_or(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    default: return dsl::make_not(random_expr(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("eval_check matches the reference evaluator on the enumerated family") {
  const std::vector<PerceptionSnapshot> snaps = snapshot_family();
  REQUIRE(snaps.size() == 3 * 3 * 3 * 4 * 3 * 2);

  // Fixed atoms covering every kind plus a few compounds, then random trees.
  std::vector<ExprPtr> exprs;
  for (const std::string& n : kNames) {
    exprs.push_back(dsl::make_atom(CheckExpr::Kind::InObs, n));
    exprs.push_back(dsl::make_atom(CheckExpr::Kind::NextTo, n));
    exprs.push_back(dsl::make_atom(CheckExpr::Kind::Carried, n));
  }
  exprs.push_back(dsl::make_atom(CheckExpr::Kind::ObjAdj, "red ball", "blue key"));
  exprs.push_back(dsl::make_atom(CheckExpr::Kind::ObjAdj, "red ball", "green door"));
  exprs.push_back(dsl::make_atom(CheckExpr::Kind::DoorOpen, "green door"));
  exprs.push_back(dsl::make_atom(CheckExpr::Kind::DoorClosed, "green door"));
  exprs.push_back(dsl::make_atom(CheckExpr::Kind::UnexploredDoorVisible));
  exprs.push_back(dsl::make_atom(CheckExpr::Kind::InUnvisitedRoom));
  exprs.push_back(dsl::make_room_atom(1));
  Rng rng(20260814);
  while (exprs.size() < 32) exprs.push_back(random_expr(rng, 3));

  long cases = 0;
  long mismatches = 0;
  for (const ExprPtr& e : exprs)
    for (const PerceptionSnapshot& s : snaps) {
      ++cases;
      if (dsl::eval_check(e, s) != ref_eval(e, s)) ++mismatches;
    }
  CHECK(cases >= 10000);
  CHECK(mismatches == 0);
}

TEST_CASE("atoms about one name ignore unrelated objects") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    PerceptionSnapshot s;
    if (rng.uniform_int(0, 1)) s.objects["red ball"] = {rng.uniform_int(-3, 3), rng.uniform_int(-3, 3)};
    if (rng.uniform_int(0, 1)) s.carried = "red ball";
    const std::vector<ExprPtr> atoms = {dsl::make_atom(CheckExpr::Kind::InObs, "red ball"),
                                        dsl::make_atom(CheckExpr::Kind::NextTo, "red ball"),
                                        dsl::make_atom(CheckExpr::Kind::Carried, "red ball")};
    std::vector<bool> before;
    for (const auto& a : atoms) before.push_back(dsl::eval_check(a, s));
    PerceptionSnapshot grown = s;
    grown.objects["purple box"] = {rng.uniform_int(-3, 3), rng.uniform_int(-3, 3)};
    for (std::size_t i = 0; i < atoms.size(); ++i)
      CHECK(dsl::eval_check(atoms[i], grown) == before[i]);
  }
}

TEST_CASE("print then parse is the identity on 1000 random ASTs") {
  Rng rng(991);
  for (int i = 0; i < 1000; ++i) {
    const ExprPtr e = random_expr(rng, 4);
    const std::string text = dsl::print_check(e);
    const ExprPtr back = dsl::parse_check(text);
    CHECK(dsl::expr_equal(e, back));
    // Printing the reparse reproduces the same text (fixed-point).
    CHECK(dsl::print_check(back) == text);
  }
}

TEST_CASE("parser accepts the documented concrete syntax") {
  const ExprPtr e = dsl::parse_check("carried(\"red key\") and next_to(\"red ball\")");
  REQUIRE(e->kind == CheckExpr::Kind::And);
  CHECK(e->lhs->kind == CheckExpr::Kind::Carried);
  CHECK(e->lhs->name == "red key");
  CHECK(e->rhs->kind == CheckExpr::Kind::NextTo);
  CHECK(e->rhs->name == "red ball");

  // precedence: not > and > or
  const ExprPtr p = dsl::parse_check("not true and false or in_obs(\"red ball\")");
  REQUIRE(p->kind == CheckExpr::Kind::Or);
  REQUIRE(p->lhs->kind == CheckExpr::Kind::And);
  CHECK(p->lhs->lhs->kind == CheckExpr::Kind::Not);
  CHECK(p->rhs->kind == CheckExpr::Kind::InObs);

  const ExprPtr q = dsl::parse_check("current_room_is(4) or (in_unvisited_room())");
  REQUIRE(q->kind == CheckExpr::Kind::Or);
  CHECK(q->lhs->room_id == 4);
  CHECK(q->rhs->kind == CheckExpr::Kind::InUnvisitedRoom);
}

TEST_CASE("parse errors carry position and expectations") {
  CHECK_THROWS_AS(dsl::parse_check(""), dsl::ParseError);
  CHECK_THROWS_AS(dsl::parse_check("in_obs("), dsl::ParseError);
  CHECK_THROWS_AS(dsl::parse_check("in_obs(\"red ball\") and"), dsl::ParseError);
  CHECK_THROWS_AS(dsl::parse_check("teleport(\"red ball\")"), dsl::ParseError);
  CHECK_THROWS_AS(dsl::parse_check("in_obs(\"red ball\") garbage"), dsl::ParseError);
  try {
    dsl::parse_check("in_obs(");
    FAIL("expected ParseError");
  } catch (const dsl::ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 8);
    CHECK(!e.expected.empty());
  }
}

TEST_CASE("canonical_check maps every api to its post-condition") {
  const auto check_atom = [](const char* api, std::vector<std::string> params,
                             CheckExpr::Kind kind) {
    const ExprPtr e = dsl::canonical_check(api, params);
    REQUIRE(e->kind == kind);
    if (!params.empty()) CHECK(e->name == params[0]);
    if (params.size() > 1) CHECK(e->name2 == params[1]);
  };
  check_atom("discover_object", {"red ball"}, CheckExpr::Kind::InObs);
  check_atom("go_next_to", {"red ball"}, CheckExpr::Kind::NextTo);
  check_atom("pick", {"red key"}, CheckExpr::Kind::Carried);
  check_atom("put_next_to", {"red key", "red ball"}, CheckExpr::Kind::ObjAdj);
  check_atom("discover_door", {"green door"}, CheckExpr::Kind::InObs);
  check_atom("go_to_door", {"green door"}, CheckExpr::Kind::NextTo);
  check_atom("go_next_to_door", {"green door"}, CheckExpr::Kind::NextTo);  // accepted alias
  check_atom("open_door", {"green door"}, CheckExpr::Kind::DoorOpen);
  check_atom("find_unexplored_door", {}, CheckExpr::Kind::UnexploredDoorVisible);
  check_atom("enter_unexplored_room", {}, CheckExpr::Kind::InUnvisitedRoom);

  CHECK_THROWS_AS(dsl::canonical_check("fly", {}), dsl::UnknownApiError);
  CHECK_THROWS_AS(dsl::canonical_check("pick", {}), dsl::UnknownApiError);
  CHECK_THROWS_AS(dsl::canonical_check("pick", {"a", "b"}), dsl::UnknownApiError);
  CHECK_THROWS_AS(dsl::canonical_check("put_next_to", {"a"}), dsl::UnknownApiError);
}
