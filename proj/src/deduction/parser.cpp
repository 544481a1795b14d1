#include "sdg/deduction/parser.hpp"

#include <cctype>

namespace sdg::deduction {

ProgramParseError::ProgramParseError(std::string msg, int line_, int column_)
    : Error("program parse error at " + std::to_string(line_) + ":" + std::to_string(column_) +
            ": " + std::move(msg)),
      line(line_),
      column(column_) {}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  Program parse() {
    Program p;
    skip_separators();
    while (!at_end()) {
      p.stmts.push_back(parse_stmt());
      skip_separators();
    }
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ProgramParseError(msg, line_, column_); }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_spaces() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  // Statement separators: newlines and semicolons.
  void skip_separators() {
    while (!at_end() && (std::isspace(static_cast<unsigned char>(peek())) || peek() == ';'))
      advance();
  }

  std::string read_ident() {
    skip_spaces();
    if (at_end() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
      fail("expected identifier");
    std::string s;
    while (!at_end() &&
           (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      s += peek();
      advance();
    }
    return s;
  }

  // Lookahead at the next identifier, skipping any whitespace (used for the
  // `not` and `else` keywords, which may sit on the next line).
  std::string peek_ident() const {
    std::size_t i = pos_;
    while (i < src_.size() && std::isspace(static_cast<unsigned char>(src_[i]))) ++i;
    std::string s;
    if (i < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[i])) || src_[i] == '_'))
      while (i < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[i])) || src_[i] == '_'))
        s += src_[i++];
    return s;
  }

  void expect_char(char c) {
    skip_spaces();
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  std::string read_string() {
    skip_spaces();
    if (at_end() || peek() != '"') fail("expected string literal");
    advance();
    std::string s;
    while (!at_end() && peek() != '"') {
      if (peek() == '\n') fail("unterminated string");
      s += peek();
      advance();
    }
    if (at_end()) fail("unterminated string");
    advance();
    return s;
  }

  checkdsl::ExprPtr read_guard() {
    skip_spaces();
    const int gline = line_, gcol = column_;
    std::string text;
    while (!at_end() && peek() != '{' && peek() != '\n') {
      text += peek();
      advance();
    }
    checkdsl::ExprPtr guard;
    try {
      guard = checkdsl::parse_check(text);
    } catch (const checkdsl::ParseError& e) {
      throw ProgramParseError(std::string("bad guard: ") + e.what(), gline, gcol);
    }
    using K = checkdsl::CheckExpr::Kind;
    if (guard->kind == K::And || guard->kind == K::Or || guard->kind == K::Not)
      throw ProgramParseError("guard must be a single atom", gline, gcol);
    return guard;
  }

  std::vector<StmtPtr> read_block() {
    expect_char('{');
    std::vector<StmtPtr> body;
    skip_separators();
    while (true) {
      if (at_end()) fail("unterminated block (missing '}')");
      skip_spaces();
      if (!at_end() && peek() == '}') {
        advance();
        return body;
      }
      body.push_back(parse_stmt());
      skip_separators();
    }
  }

  StmtPtr parse_stmt() {
    const std::string head = read_ident();
    if (head == "skill") {
      const std::string name = read_ident();
      expect_char('(');
      std::vector<std::string> params;
      skip_spaces();
      if (!at_end() && peek() != ')') {
        params.push_back(read_string());
        skip_spaces();
        while (!at_end() && peek() == ',') {
          advance();
          params.push_back(read_string());
          skip_spaces();
        }
      }
      expect_char(')');
      return make_skill(name, std::move(params));
    }
    if (head == "prim") return make_prim(read_ident());
    if (head == "while") {
      const std::string kw = read_ident();
      if (kw != "not") fail("expected 'not' after 'while'");
      checkdsl::ExprPtr guard = read_guard();
      return make_while(std::move(guard), read_block());
    }
    if (head == "if") {
      bool negated = false;
      if (peek_ident() == "not") {
        read_ident();
        negated = true;
      }
      checkdsl::ExprPtr guard = read_guard();
      std::vector<StmtPtr> then_body = read_block();
      std::vector<StmtPtr> else_body;
      if (peek_ident() == "else") {
        read_ident();
        else_body = read_block();
      }
      return make_if(std::move(guard), negated, std::move(then_body), std::move(else_body));
    }
    if (head == "flush") return make_flush();
    if (head == "fail") return make_fail(read_string());
    fail("unknown statement '" + head + "'");
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

Program parse_program(const std::string& text) { return Parser(text).parse(); }

}  // namespace sdg::deduction
