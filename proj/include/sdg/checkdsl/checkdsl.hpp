#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sdg/common/errors.hpp"
#include "sdg/perception/perception.hpp"

namespace sdg::checkdsl {

// Immutable boolean expression over a perception snapshot. Atoms that name
// entities absent from the snapshot evaluate to false, never to an error.
struct CheckExpr;
using ExprPtr = std::shared_ptr<const CheckExpr>;

struct CheckExpr {
  enum class Kind {
    InObs,
    NextTo,
    Carried,
    ObjAdj,
    DoorOpen,
    DoorClosed,
    UnexploredDoorVisible,
    InUnvisitedRoom,
    CurrentRoomIs,
    And,
    Or,
    Not,
    True,
    False,
  };

  Kind kind = Kind::True;
  std::string name;    // first entity argument
  std::string name2;   // second entity argument (ObjAdj)
  int room_id = 0;     // CurrentRoomIs
  ExprPtr lhs, rhs;    // And/Or children; Not uses lhs
};

ExprPtr make_atom(CheckExpr::Kind kind, std::string name = "", std::string name2 = "");
ExprPtr make_room_atom(int room_id);
ExprPtr make_and(ExprPtr a, ExprPtr b);
ExprPtr make_or(ExprPtr a, ExprPtr b);
ExprPtr make_not(ExprPtr a);
ExprPtr make_true();
ExprPtr make_false();

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

struct ParseError : Error {
  ParseError(std::string msg, int line, int column, std::vector<std::string> expected);
  int line;
  int column;
  std::vector<std::string> expected;
};

ExprPtr parse_check(const std::string& text);
std::string print_check(const ExprPtr& expr);

bool eval_check(const ExprPtr& expr, const perception::PerceptionSnapshot& snap);

struct UnknownApiError : Error {
  using Error::Error;
};

// Post-condition check for each of the nine skill verbs. Accepts the
// go_next_to_door alias for go_to_door.
ExprPtr canonical_check(const std::string& api, const std::vector<std::string>& params);

}  // namespace sdg::checkdsl
