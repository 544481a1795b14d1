#include "sdg/deduction/program.hpp"

#include <sstream>

namespace sdg::deduction {

StmtPtr make_skill(std::string name, std::vector<std::string> params) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::Skill;
  s->name = std::move(name);
  s->params = std::move(params);
  return s;
}

StmtPtr make_prim(std::string action_name) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::Prim;
  s->name = std::move(action_name);
  return s;
}

StmtPtr make_while(checkdsl::ExprPtr guard_atom, std::vector<StmtPtr> body, int max_iter) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::While;
  s->guard = std::move(guard_atom);
  s->body = std::move(body);
  s->max_iter = max_iter;
  return s;
}

StmtPtr make_if(checkdsl::ExprPtr guard_atom, bool negated, std::vector<StmtPtr> then_body,
                std::vector<StmtPtr> else_body) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::If;
  s->guard = std::move(guard_atom);
  s->negate_if = negated;
  s->body = std::move(then_body);
  s->else_body = std::move(else_body);
  return s;
}

StmtPtr make_flush() {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::Flush;
  return s;
}

StmtPtr make_fail(std::string message) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::Fail;
  s->message = std::move(message);
  return s;
}

namespace {

void print_stmt_rec(const Stmt& s, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  auto print_block = [&](const std::vector<StmtPtr>& block) {
    out += "{\n";
    for (const auto& st : block) print_stmt_rec(*st, indent + 1, out);
    out += pad + "}";
  };
  out += pad;
  switch (s.kind) {
    case Stmt::Kind::Skill: {
      out += "skill " + s.name + "(";
      for (std::size_t i = 0; i < s.params.size(); ++i) {
        if (i > 0) out += ", ";
        out += '"' + s.params[i] + '"';
      }
      out += ")";
      break;
    }
    case Stmt::Kind::Prim:
      out += "prim " + s.name;
      break;
    case Stmt::Kind::While:
      out += "while not " + checkdsl::print_check(s.guard) + " ";
      print_block(s.body);
      break;
    case Stmt::Kind::If:
      out += "if " + std::string(s.negate_if ? "not " : "") + checkdsl::print_check(s.guard) + " ";
      print_block(s.body);
      if (!s.else_body.empty()) {
        out += " else ";
        print_block(s.else_body);
      }
      break;
    case Stmt::Kind::Flush:
      out += "flush";
      break;
    case Stmt::Kind::Fail:
      out += "fail \"" + s.message + "\"";
      break;
  }
  out += "\n";
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.name != b.name || a.params != b.params ||
      a.negate_if != b.negate_if || a.max_iter != b.max_iter || a.message != b.message)
    return false;
  if ((a.guard == nullptr) != (b.guard == nullptr)) return false;
  if (a.guard && !checkdsl::expr_equal(a.guard, b.guard)) return false;
  auto blocks_equal = [](const std::vector<StmtPtr>& x, const std::vector<StmtPtr>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!stmt_equal(*x[i], *y[i])) return false;
    return true;
  };
  return blocks_equal(a.body, b.body) && blocks_equal(a.else_body, b.else_body);
}

}  // namespace

std::string print_program(const Program& p) {
  std::string out;
  for (const auto& s : p.stmts) print_stmt_rec(*s, 0, out);
  return out;
}

std::string print_stmt(const Stmt& s) {
  std::string out;
  print_stmt_rec(s, 0, out);
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

bool program_equal(const Program& a, const Program& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (std::size_t i = 0; i < a.stmts.size(); ++i)
    if (!stmt_equal(*a.stmts[i], *b.stmts[i])) return false;
  return true;
}

std::string path_to_string(const std::vector<int>& path) {
  std::ostringstream os;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) os << '.';
    os << path[i];
  }
  return os.str();
}

StmtLocation locate_stmt(Program& p, std::vector<int> path) {
  if (path.empty()) return {};
  std::vector<StmtPtr>* list = &p.stmts;
  for (std::size_t depth = 0; depth < path.size(); ++depth) {
    const int i = path[depth];
    if (i < 0 || i >= static_cast<int>(list->size())) return {};
    StmtPtr s = (*list)[i];
    if (depth + 1 == path.size()) return {list, i, s};
    // Descend: While exposes its body; If exposes then-branch ++ else-branch,
    // so an index past the then-branch is remapped into the else list.
    int& child = path[depth + 1];
    if (s->kind == Stmt::Kind::While) {
      list = &s->body;
    } else if (s->kind == Stmt::Kind::If) {
      if (child < static_cast<int>(s->body.size())) {
        list = &s->body;
      } else {
        child -= static_cast<int>(s->body.size());
        list = &s->else_body;
      }
    } else {
      return {};
    }
  }
  return {};
}

}  // namespace sdg::deduction
