/*
 * Copyright 2026 The itle authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*!
  \file formula_text.hpp
  \brief Concrete syntax: recursive-descent parser and minimal-paren printer.

  Precedence, low to high:  ->  |  &  U,R  X F G ~  primary.
  `->`, `U` and `R` associate to the right. `~a` desugars to `a -> false`,
  `true` to `false -> false`; the printer re-sugars both.
*/

#pragma once

#include <cctype>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "itle/formula.hpp"

namespace itle {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t position, const std::string& message)
      : std::runtime_error("parse error at " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

namespace detail {

struct Token {
  enum class Type { Ident, False, True, Next, Eventually, Henceforth, UntilOp, ReleaseOp, Not, Arrow, Or, And, LParen, RParen, End };
  Type type;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> lex_formula(std::string_view input) {
  using T = Token::Type;
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < input.size()) {
    char c = input[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (c == '(') { out.push_back({T::LParen, "(", start}); ++i; continue; }
    if (c == ')') { out.push_back({T::RParen, ")", start}); ++i; continue; }
    if (c == '&') { out.push_back({T::And, "&", start}); ++i; continue; }
    if (c == '|') { out.push_back({T::Or, "|", start}); ++i; continue; }
    if (c == '~') { out.push_back({T::Not, "~", start}); ++i; continue; }
    if (c == '-') {
      if (i + 1 < input.size() && input[i + 1] == '>') { out.push_back({T::Arrow, "->", start}); i += 2; continue; }
      throw ParseError(start, "expected '->'");
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      ++i;
      switch (c) {
        case 'X': out.push_back({T::Next, "X", start}); continue;
        case 'F': out.push_back({T::Eventually, "F", start}); continue;
        case 'G': out.push_back({T::Henceforth, "G", start}); continue;
        case 'U': out.push_back({T::UntilOp, "U", start}); continue;
        case 'R': out.push_back({T::ReleaseOp, "R", start}); continue;
        default: throw ParseError(start, std::string("unknown operator '") + c + "' (expected X, F, G, U or R)");
      }
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < input.size() && (std::isalnum(static_cast<unsigned char>(input[j])) || input[j] == '_')) ++j;
      std::string word(input.substr(i, j - i));
      i = j;
      if (word == "false") out.push_back({T::False, word, start});
      else if (word == "true") out.push_back({T::True, word, start});
      else out.push_back({T::Ident, word, start});
      continue;
    }
    throw ParseError(start, std::string("unexpected character '") + c + "'");
  }
  out.push_back({T::End, "", input.size()});
  return out;
}

class FormulaParser {
public:
  explicit FormulaParser(std::string_view input) : tokens_(lex_formula(input)) {}

  Formula parse() {
    if (tokens_.front().type == Token::Type::End) throw ParseError(0, "empty formula");
    Formula f = parse_implies();
    expect_end();
    return f;
  }

private:
  using T = Token::Type;

  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  void expect_end() {
    if (peek().type != T::End)
      throw ParseError(peek().pos, "expected end of formula, found '" + peek().text + "'");
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (peek().type == T::Arrow) {
      take();
      return Formula::implies(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().type == T::Or) {
      take();
      f = Formula::disj(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_until_release();
    while (peek().type == T::And) {
      take();
      f = Formula::conj(std::move(f), parse_until_release());
    }
    return f;
  }

  Formula parse_until_release() {
    Formula lhs = parse_unary();
    if (peek().type == T::UntilOp) {
      take();
      return Formula::until(std::move(lhs), parse_until_release());
    }
    if (peek().type == T::ReleaseOp) {
      take();
      return Formula::release(std::move(lhs), parse_until_release());
    }
    return lhs;
  }

  Formula parse_unary() {
    switch (peek().type) {
      case T::Next: take(); return Formula::next(parse_unary());
      case T::Eventually: take(); return Formula::eventually(parse_unary());
      case T::Henceforth: take(); return Formula::henceforth(parse_unary());
      case T::Not: take(); return Formula::negation(parse_unary());
      default: return parse_primary();
    }
  }

  Formula parse_primary() {
    Token t = take();
    switch (t.type) {
      case T::Ident: return Formula::atom(t.text);
      case T::False: return Formula::bottom();
      case T::True: return Formula::top();
      case T::LParen: {
        Formula f = parse_implies();
        if (peek().type != T::RParen)
          throw ParseError(peek().pos, "expected ')', found '" + peek().text + "'");
        take();
        return f;
      }
      case T::End:
        throw ParseError(t.pos, "expected formula, found end of input");
      default:
        throw ParseError(t.pos, "expected formula, found '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/* Precedence of a node as printed, after re-sugaring. */
inline int print_prec(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Implies:
      if (f.right().kind() == K::Bottom)
        return f.left().kind() == K::Bottom ? 5 : 4;  // true / ~x
      return 0;
    case K::Or: return 1;
    case K::And: return 2;
    case K::Until:
    case K::Release: return 3;
    case K::Next:
    case K::Eventually:
    case K::Henceforth: return 4;
    case K::Atom:
    case K::Bottom: return 5;
  }
  return 5;
}

inline std::string print_at(const Formula& f, int min_prec);

inline std::string render(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: return f.atom_name();
    case K::Bottom: return "false";
    case K::And: return print_at(f.left(), 2) + " & " + print_at(f.right(), 3);
    case K::Or: return print_at(f.left(), 1) + " | " + print_at(f.right(), 2);
    case K::Until: return print_at(f.left(), 4) + " U " + print_at(f.right(), 3);
    case K::Release: return print_at(f.left(), 4) + " R " + print_at(f.right(), 3);
    case K::Implies: {
      if (f.right().kind() == K::Bottom) {
        if (f.left().kind() == K::Bottom) return "true";
        return "~" + print_at(f.left(), 4);
      }
      return print_at(f.left(), 1) + " -> " + print_at(f.right(), 0);
    }
    case K::Next:
    case K::Eventually:
    case K::Henceforth: {
      char op = f.kind() == K::Next ? 'X' : f.kind() == K::Eventually ? 'F' : 'G';
      std::string sub = print_at(f.child(), 4);
      bool bracketed = !sub.empty() && sub.front() == '(';
      return std::string(1, op) + (bracketed ? "" : " ") + sub;
    }
  }
  throw std::logic_error("render: bad kind");
}

inline std::string print_at(const Formula& f, int min_prec) {
  std::string s = render(f);
  return print_prec(f) < min_prec ? "(" + s + ")" : s;
}

}  // namespace detail

inline Formula parse_formula(std::string_view input) { return detail::FormulaParser(input).parse(); }

inline std::string print_formula(const Formula& f) { return detail::print_at(f, 0); }

/* One formula per line; '#' starts a comment; blank lines skipped. */
inline std::vector<Formula> parse_formula_lines(std::istream& in) {
  std::vector<Formula> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
    if (blank) continue;
    try {
      out.push_back(parse_formula(line));
    } catch (const ParseError& e) {
      throw ParseError(e.position(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<Formula> parse_formula_lines(const std::string& text) {
  std::istringstream in(text);
  return parse_formula_lines(in);
}

}  // namespace itle
