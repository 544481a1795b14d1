#include "sdg/checkdsl/checkdsl.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace sdg::checkdsl {

ExprPtr make_atom(CheckExpr::Kind kind, std::string name, std::string name2) {
  auto e = std::make_shared<CheckExpr>();
  e->kind = kind;
  e->name = std::move(name);
  e->name2 = std::move(name2);
  return e;
}

ExprPtr make_room_atom(int room_id) {
  auto e = std::make_shared<CheckExpr>();
  e->kind = CheckExpr::Kind::CurrentRoomIs;
  e->room_id = room_id;
  return e;
}

ExprPtr make_and(ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<CheckExpr>();
  e->kind = CheckExpr::Kind::And;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

ExprPtr make_or(ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<CheckExpr>();
  e->kind = CheckExpr::Kind::Or;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

ExprPtr make_not(ExprPtr a) {
  auto e = std::make_shared<CheckExpr>();
  e->kind = CheckExpr::Kind::Not;
  e->lhs = std::move(a);
  return e;
}

ExprPtr make_true() { return make_atom(CheckExpr::Kind::True); }
ExprPtr make_false() { return make_atom(CheckExpr::Kind::False); }

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind || a->name != b->name || a->name2 != b->name2 ||
      a->room_id != b->room_id)
    return false;
  return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
}

// --- parsing ----------------------------------------------------------------

namespace {

std::string format_parse_error(const std::string& msg, int line, int column) {
  std::ostringstream os;
  os << "parse error at " << line << ":" << column << ": " << msg;
  return os.str();
}

struct Token {
  enum class Kind { Ident, String, Int, LParen, RParen, Comma, End } kind;
  std::string text;
  int value = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) {
      t.kind = Token::Kind::End;
      return t;
    }
    const char c = src_[pos_];
    if (c == '(') return advance(t, Token::Kind::LParen, "(");
    if (c == ')') return advance(t, Token::Kind::RParen, ")");
    if (c == ',') return advance(t, Token::Kind::Comma, ",");
    if (c == '"') {
      consume();
      std::string text;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        if (src_[pos_] == '\n')
          throw ParseError(format_parse_error("unterminated string", t.line, t.column), t.line,
                           t.column, {"\""});
        text += src_[pos_];
        consume();
      }
      if (pos_ >= src_.size())
        throw ParseError(format_parse_error("unterminated string", t.line, t.column), t.line,
                         t.column, {"\""});
      consume();
      t.kind = Token::Kind::String;
      t.text = std::move(text);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::string digits;
      if (c == '-') {
        digits += c;
        consume();
      }
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits += src_[pos_];
        consume();
      }
      t.kind = Token::Kind::Int;
      t.text = digits;
      t.value = std::atoi(digits.c_str());
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ident += src_[pos_];
        consume();
      }
      t.kind = Token::Kind::Ident;
      t.text = std::move(ident);
      return t;
    }
    throw ParseError(format_parse_error(std::string("unexpected character '") + c + "'", t.line,
                                        t.column),
                     t.line, t.column, {"expression"});
  }

 private:
  Token advance(Token t, Token::Kind kind, const char* text) {
    t.kind = kind;
    t.text = text;
    consume();
    return t;
  }
  void consume() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) consume();
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lexer_(src) { current_ = lexer_.next(); }

  ExprPtr parse() {
    ExprPtr e = parse_or();
    expect(Token::Kind::End, "end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::vector<std::string>& expected) {
    std::string msg = "expected ";
    for (size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += " or ";
      msg += expected[i];
    }
    msg += ", got '" + (current_.kind == Token::Kind::End ? std::string("<end>") : current_.text) + "'";
    throw ParseError(format_parse_error(msg, current_.line, current_.column), current_.line,
                     current_.column, expected);
  }

  void expect(Token::Kind kind, const std::string& what) {
    if (current_.kind != kind) fail({what});
    current_ = lexer_.next();
  }

  bool accept_ident(const char* word) {
    if (current_.kind == Token::Kind::Ident && current_.text == word) {
      current_ = lexer_.next();
      return true;
    }
    return false;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (accept_ident("or")) lhs = make_or(std::move(lhs), parse_and());
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (accept_ident("and")) lhs = make_and(std::move(lhs), parse_not());
    return lhs;
  }

  ExprPtr parse_not() {
    if (accept_ident("not")) return make_not(parse_not());
    return parse_primary();
  }

  std::string parse_string_arg() {
    if (current_.kind != Token::Kind::String) fail({"string literal"});
    std::string s = current_.text;
    current_ = lexer_.next();
    return s;
  }

  ExprPtr parse_primary() {
    if (current_.kind == Token::Kind::LParen) {
      current_ = lexer_.next();
      ExprPtr e = parse_or();
      expect(Token::Kind::RParen, ")");
      return e;
    }
    if (current_.kind != Token::Kind::Ident)
      fail({"atom", "'('", "'not'", "'true'", "'false'"});
    const std::string head = current_.text;
    current_ = lexer_.next();
    if (head == "true") return make_true();
    if (head == "false") return make_false();

    expect(Token::Kind::LParen, "'('");
    ExprPtr e;
    if (head == "in_obs") {
      e = make_atom(CheckExpr::Kind::InObs, parse_string_arg());
    } else if (head == "next_to") {
      e = make_atom(CheckExpr::Kind::NextTo, parse_string_arg());
    } else if (head == "carried") {
      e = make_atom(CheckExpr::Kind::Carried, parse_string_arg());
    } else if (head == "obj_adj") {
      std::string a = parse_string_arg();
      expect(Token::Kind::Comma, "','");
      e = make_atom(CheckExpr::Kind::ObjAdj, std::move(a), parse_string_arg());
    } else if (head == "door_open") {
      e = make_atom(CheckExpr::Kind::DoorOpen, parse_string_arg());
    } else if (head == "door_closed") {
      e = make_atom(CheckExpr::Kind::DoorClosed, parse_string_arg());
    } else if (head == "unexplored_door_visible") {
      e = make_atom(CheckExpr::Kind::UnexploredDoorVisible);
    } else if (head == "in_unvisited_room") {
      e = make_atom(CheckExpr::Kind::InUnvisitedRoom);
    } else if (head == "current_room_is") {
      if (current_.kind != Token::Kind::Int) fail({"integer"});
      e = make_room_atom(current_.value);
      current_ = lexer_.next();
    } else {
      fail({"atom name"});
    }
    expect(Token::Kind::RParen, "')'");
    return e;
  }

  Lexer lexer_;
  Token current_;
};

int precedence(CheckExpr::Kind k) {
  switch (k) {
    case CheckExpr::Kind::Or: return 1;
    case CheckExpr::Kind::And: return 2;
    case CheckExpr::Kind::Not: return 3;
    default: return 4;
  }
}

void print_rec(const ExprPtr& e, int parent_prec, std::string& out) {
  const int prec = precedence(e->kind);
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e->kind) {
    case CheckExpr::Kind::InObs: out += "in_obs(\"" + e->name + "\")"; break;
    case CheckExpr::Kind::NextTo: out += "next_to(\"" + e->name + "\")"; break;
    case CheckExpr::Kind::Carried: out += "carried(\"" + e->name + "\")"; break;
    case CheckExpr::Kind::ObjAdj:
      out += "obj_adj(\"" + e->name + "\", \"" + e->name2 + "\")";
      break;
    case CheckExpr::Kind::DoorOpen: out += "door_open(\"" + e->name + "\")"; break;
    case CheckExpr::Kind::DoorClosed: out += "door_closed(\"" + e->name + "\")"; break;
    case CheckExpr::Kind::UnexploredDoorVisible: out += "unexplored_door_visible()"; break;
    case CheckExpr::Kind::InUnvisitedRoom: out += "in_unvisited_room()"; break;
    case CheckExpr::Kind::CurrentRoomIs:
      out += "current_room_is(" + std::to_string(e->room_id) + ")";
      break;
    case CheckExpr::Kind::True: out += "true"; break;
    case CheckExpr::Kind::False: out += "false"; break;
    case CheckExpr::Kind::Not:
      out += "not ";
      print_rec(e->lhs, precedence(CheckExpr::Kind::Not), out);
      break;
    case CheckExpr::Kind::And:
      // Right child gets a strictly higher threshold so associativity survives
      // a print/parse round trip.
      print_rec(e->lhs, prec, out);
      out += " and ";
      print_rec(e->rhs, prec + 1, out);
      break;
    case CheckExpr::Kind::Or:
      print_rec(e->lhs, prec, out);
      out += " or ";
      print_rec(e->rhs, prec + 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

ParseError::ParseError(std::string msg, int line_, int column_, std::vector<std::string> expected_)
    : Error(std::move(msg)), line(line_), column(column_), expected(std::move(expected_)) {}

ExprPtr parse_check(const std::string& text) { return Parser(text).parse(); }

std::string print_check(const ExprPtr& expr) {
  std::string out;
  print_rec(expr, 0, out);
  return out;
}

// --- evaluation -------------------------------------------------------------

namespace {

bool lookup_pos(const perception::PerceptionSnapshot& snap, const std::string& name, int* x, int* y) {
  if (auto it = snap.objects.find(name); it != snap.objects.end()) {
    *x = it->second.first;
    *y = it->second.second;
    return true;
  }
  if (auto it = snap.doors.find(name); it != snap.doors.end()) {
    *x = it->second.x;
    *y = it->second.y;
    return true;
  }
  return false;
}

}  // namespace

bool eval_check(const ExprPtr& expr, const perception::PerceptionSnapshot& snap) {
  switch (expr->kind) {
    case CheckExpr::Kind::True: return true;
    case CheckExpr::Kind::False: return false;
    case CheckExpr::Kind::And: return eval_check(expr->lhs, snap) && eval_check(expr->rhs, snap);
    case CheckExpr::Kind::Or: return eval_check(expr->lhs, snap) || eval_check(expr->rhs, snap);
    case CheckExpr::Kind::Not: return !eval_check(expr->lhs, snap);
    case CheckExpr::Kind::InObs:
      return snap.objects.count(expr->name) > 0 || snap.doors.count(expr->name) > 0;
    case CheckExpr::Kind::NextTo: {
      int x, y;
      if (!lookup_pos(snap, expr->name, &x, &y)) return false;
      return std::abs(x) + std::abs(y) == 1;
    }
    case CheckExpr::Kind::Carried: return snap.carried && *snap.carried == expr->name;
    case CheckExpr::Kind::ObjAdj: {
      int x1, y1, x2, y2;
      if (!lookup_pos(snap, expr->name, &x1, &y1)) return false;
      if (!lookup_pos(snap, expr->name2, &x2, &y2)) return false;
      return std::abs(x1 - x2) + std::abs(y1 - y2) == 1;
    }
    case CheckExpr::Kind::DoorOpen: {
      auto it = snap.doors.find(expr->name);
      return it != snap.doors.end() && it->second.status == 0;
    }
    case CheckExpr::Kind::DoorClosed: {
      auto it = snap.doors.find(expr->name);
      return it != snap.doors.end() && it->second.status == 1;
    }
    case CheckExpr::Kind::UnexploredDoorVisible: {
      for (const auto& [name, d] : snap.doors) {
        const bool visited = std::find(snap.visited_rooms.begin(), snap.visited_rooms.end(),
                                       d.room_id) != snap.visited_rooms.end();
        if (!visited) return true;
      }
      return false;
    }
    case CheckExpr::Kind::InUnvisitedRoom:
      return std::find(snap.visited_rooms.begin(), snap.visited_rooms.end(), snap.current_room) ==
             snap.visited_rooms.end();
    case CheckExpr::Kind::CurrentRoomIs: return snap.current_room == expr->room_id;
  }
  return false;
}

ExprPtr canonical_check(const std::string& api, const std::vector<std::string>& params) {
  auto want = [&](size_t n) {
    if (params.size() != n)
      throw UnknownApiError("api '" + api + "' takes " + std::to_string(n) + " parameter(s), got " +
                            std::to_string(params.size()));
  };
  if (api == "discover_object" || api == "discover_door") {
    want(1);
    return make_atom(CheckExpr::Kind::InObs, params[0]);
  }
  if (api == "go_next_to" || api == "go_to_door" || api == "go_next_to_door") {
    want(1);
    return make_atom(CheckExpr::Kind::NextTo, params[0]);
  }
  if (api == "pick") {
    want(1);
    return make_atom(CheckExpr::Kind::Carried, params[0]);
  }
  if (api == "put_next_to") {
    want(2);
    return make_atom(CheckExpr::Kind::ObjAdj, params[0], params[1]);
  }
  if (api == "open_door") {
    want(1);
    return make_atom(CheckExpr::Kind::DoorOpen, params[0]);
  }
  if (api == "find_unexplored_door") {
    want(0);
    return make_atom(CheckExpr::Kind::UnexploredDoorVisible);
  }
  if (api == "enter_unexplored_room") {
    want(0);
    return make_atom(CheckExpr::Kind::InUnvisitedRoom);
  }
  throw UnknownApiError("unknown api '" + api + "'");
}

}  // namespace sdg::checkdsl
