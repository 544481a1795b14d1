#pragma once

#include <string>
#include <vector>

#include "sdg/common/errors.hpp"
#include "sdg/deduction/program.hpp"

namespace sdg::deduction {

struct ProgramParseError : Error {
  ProgramParseError(std::string msg, int line, int column);
  int line;
  int column;
};

// Concrete syntax: statements separated by `;` or newlines;
//   skill NAME("p1"[, "p2"])     prim NAME
//   while not GUARD { ... }      if [not] GUARD { ... } [else { ... }]
//   flush                        fail "msg"
// GUARD is a single check-DSL atom. print_program/parse_program round-trip.
Program parse_program(const std::string& text);

}  // namespace sdg::deduction
