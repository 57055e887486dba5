#pragma once

// Recursive-descent parser for the ASCII formula grammar:
//
//   iff     := implies ( "<->" implies )*
//   implies := or ( "->" implies )?
//   or      := and ( "|" and )*
//   and     := unary ( "&" unary )*
//   unary   := "!" unary | "K[" int "]" unary | "Kinf[" int "]" unary
//            | "[" iff "]" unary | "<" iff ">" unary | primary
//   primary := ident | "true" | "false" | "E[" int "," int "]"
//            | "P[" int "," int "]" | "(" iff ")"
//
// Announcement brackets are prefix operators, so [p]q & r reads ([p]q) & r.

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dbel/formula.hpp"

namespace dbel {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ParseOptions {
  /// Negative E/P constants only arise from rewriting; source text rejects them by default.
  bool allow_negative_depths = false;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, ParseOptions opts) : text_(text), opts_(opts) {}

  Formula parse_all() {
    skip_ws();
    if (at_end()) fail("empty formula");
    Formula f = parse_iff();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return f;
  }

 private:
  std::string_view text_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && !at_end(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      advance(tok.size());
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string read_ident() {
    skip_ws();
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  std::int64_t read_int(bool is_depth) {
    skip_ws();
    bool negative = false;
    if (peek() == '-') {
      if (!is_depth) fail("agent id must be non-negative");
      if (!opts_.allow_negative_depths) fail("negative depth literal");
      negative = true;
      advance();
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer");
    std::int64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      if (v > (INT64_MAX - 9) / 10) fail("integer literal too large");
      v = v * 10 + (peek() - '0');
      advance();
    }
    return negative ? -v : v;
  }

  AgentId read_agent() {
    std::int64_t a = read_int(false);
    if (a > UINT32_MAX) fail("agent id too large");
    return static_cast<AgentId>(a);
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    while (accept("<->")) lhs = iff(lhs, parse_implies());
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept("->")) return implies(lhs, parse_implies());
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (true) {
      skip_ws();
      if (peek() != '|') break;
      advance();
      lhs = disj(lhs, parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (accept("&")) lhs = conj(lhs, parse_unary());
    return lhs;
  }

  Formula parse_unary() {
    skip_ws();
    if (at_end()) fail("unexpected end of input");
    char c = peek();
    if (c == '!') {
      advance();
      return neg(parse_unary());
    }
    if (c == '[') {
      advance();
      Formula announced = parse_iff();
      expect("]");
      return announce(announced, parse_unary());
    }
    if (c == '<' && peek(1) != '-') {
      advance();
      Formula announced = parse_iff();
      expect(">");
      return dual_announce(announced, parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    skip_ws();
    if (peek() == '(') {
      advance();
      Formula f = parse_iff();
      expect(")");
      return f;
    }
    std::size_t line = line_, col = col_;
    std::string id = read_ident();
    if (id.empty()) {
      if (at_end()) fail("unexpected end of input");
      fail(std::string("unexpected '") + peek() + "'");
    }
    skip_ws();
    bool bracket = peek() == '[';
    if (id == "K" || id == "Kinf") {
      if (!bracket) throw ParseError("expected '[' after " + id, line_, col_);
      advance();
      AgentId a = read_agent();
      expect("]");
      Formula body = parse_unary();
      return id == "K" ? know(a, body) : know_inf(a, body);
    }
    if (id == "E" || id == "P") {
      if (!bracket) throw ParseError("expected '[' after " + id, line_, col_);
      advance();
      AgentId a = read_agent();
      expect(",");
      std::int64_t d = read_int(true);
      expect("]");
      return id == "E" ? exact(a, d) : at_least(a, d);
    }
    if (id == "true") return top();
    if (id == "false") return bottom();
    if (std::isdigit(static_cast<unsigned char>(id.front())))
      throw ParseError("atom names must not start with a digit", line, col);
    return atom(id);
  }
};

}  // namespace detail

/// Parses a formula; throws ParseError with the 1-based line and column.
inline Formula parse(std::string_view text, ParseOptions opts = {}) {
  return detail::Parser(text, opts).parse_all();
}

}  // namespace dbel
