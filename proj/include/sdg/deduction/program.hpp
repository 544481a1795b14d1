#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sdg/checkdsl/checkdsl.hpp"

namespace sdg::deduction {

// GroundScript AST. A program is a statement sequence; While loops carry a
// guard atom (the loop runs until the atom holds, bounded by max_iter) and If
// branches on a guard atom with an optional negation.
struct Stmt;
using StmtPtr = std::shared_ptr<Stmt>;

struct Stmt {
  enum class Kind { Skill, Prim, While, If, Flush, Fail };
  Kind kind = Kind::Flush;

  std::string name;                 // Skill api / Prim action name
  std::vector<std::string> params;  // Skill parameters

  checkdsl::ExprPtr guard;          // While / If guard atom
  bool negate_if = false;           // If: condition is `not guard`
  std::vector<StmtPtr> body;        // While body / If then-branch
  std::vector<StmtPtr> else_body;   // If else-branch
  int max_iter = 9;                 // While bound (room count)

  std::string message;              // Fail
};

struct Program {
  std::vector<StmtPtr> stmts;
};

StmtPtr make_skill(std::string name, std::vector<std::string> params = {});
StmtPtr make_prim(std::string action_name);
StmtPtr make_while(checkdsl::ExprPtr guard_atom, std::vector<StmtPtr> body, int max_iter = 9);
StmtPtr make_if(checkdsl::ExprPtr guard_atom, bool negated, std::vector<StmtPtr> then_body,
                std::vector<StmtPtr> else_body = {});
StmtPtr make_flush();
StmtPtr make_fail(std::string message);

std::string print_program(const Program& p);
std::string print_stmt(const Stmt& s);  // single statement, no trailing newline
bool program_equal(const Program& a, const Program& b);

// Statement index paths: element i indexes the current statement list; to
// descend, a While exposes its body and an If exposes then-branch followed by
// else-branch as one child list.
std::string path_to_string(const std::vector<int>& path);

struct StmtLocation {
  std::vector<StmtPtr>* list = nullptr;  // owning list
  int index = -1;
  StmtPtr stmt;
};

// Resolves a path to the owning list + index; returns an empty location when
// the path does not exist.
StmtLocation locate_stmt(Program& p, std::vector<int> path);

}  // namespace sdg::deduction
