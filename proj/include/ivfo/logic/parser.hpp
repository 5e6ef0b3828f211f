#pragma once

// Recursive-descent parser for the textual formula syntax:
//
//   expr  := ('exists' | 'forall' | 'exists!') var '.' expr
//          | ('existsS' | 'forallS') Var '.' expr
//          | iff
//   iff   := imp ('<->' iff)?
//   imp   := or ('->' imp)?
//   or    := and ('|' and)*
//   and   := unary ('&' unary)*
//   unary := '!' unary | '(' expr ')' | quantified expr | atom
//   atom  := 'true' | 'false' | 'E(' var ',' var ')' | var '=' var | var '!=' var
//          | var 'in' Var | ident '(' var ',' var ')' | ident '(' var ')'
//          | 'dist(' var ',' var ')' ('=' | '<=') int | 'deg(' var ')' '=' int
//
// Element variables start lowercase, set variables uppercase.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "ivfo/logic/formula.hpp"

namespace ivfo::logic {

enum class Dialect { FO, MSO1 };

namespace detail {

struct Token {
  enum Kind { Ident, Int, Sym, End } kind;
  std::string text;
  int line;
  int column;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      // `exists!` is one keyword.
      if (src.substr(i, j - i) == "exists" && j < src.size() && src[j] == '!' &&
          (j + 1 >= src.size() || src[j + 1] != '=')) {
        ++j;
      }
      out.push_back({Token::Ident, std::string(src.substr(i, j - i)), l, cc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Int, std::string(src.substr(i, j - i)), l, cc});
      advance(j - i);
      continue;
    }
    static const char* multi[] = {"<->", "->", "!=", "<="};
    bool matched = false;
    for (const char* m : multi) {
      std::string_view mv(m);
      if (src.substr(i, mv.size()) == mv) {
        out.push_back({Token::Sym, std::string(mv), l, cc});
        advance(mv.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("().,=!&|").find(c) != std::string_view::npos) {
      out.push_back({Token::Sym, std::string(1, c), l, cc});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, cc);
  }
  out.push_back({Token::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, Dialect dialect) : toks_(tokenize(src)), dialect_(dialect) {}

  Formula parse() {
    Formula f = expr();
    if (peek().kind != Token::End) fail("end of input");
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_sym(std::string_view s) const { return peek().kind == Token::Sym && peek().text == s; }
  bool at_ident(std::string_view s) const { return peek().kind == Token::Ident && peek().text == s; }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string got = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    throw ParseError("expected " + expected + ", got " + got, t.line, t.column);
  }

  void expect(std::string_view s) {
    if (!at_sym(s)) fail("'" + std::string(s) + "'");
    next();
  }

  std::string element_var() {
    if (peek().kind != Token::Ident || is_set_variable(peek().text) || is_keyword(peek().text))
      fail("element variable");
    return next().text;
  }

  std::string set_var() {
    if (peek().kind != Token::Ident || !is_set_variable(peek().text)) fail("set variable");
    return next().text;
  }

  int integer() {
    if (peek().kind != Token::Int) fail("integer");
    return std::stoi(next().text);
  }

  static bool is_keyword(const std::string& s) {
    return s == "exists" || s == "forall" || s == "existsS" || s == "forallS" || s == "exists!" || s == "in" ||
           s == "true" || s == "false";
  }

  bool at_quantifier() const {
    return at_ident("exists") || at_ident("forall") || at_ident("exists!") || at_ident("existsS") ||
           at_ident("forallS");
  }

  Formula quantified() {
    const Token kw = next();
    if (kw.text == "existsS" || kw.text == "forallS") {
      if (dialect_ == Dialect::FO)
        throw DialectError("set quantifier '" + kw.text + "' at " + std::to_string(kw.line) + ":" +
                           std::to_string(kw.column) + " is not FO");
      std::string v = set_var();
      expect(".");
      Formula body = expr();
      return kw.text == "existsS" ? fo::exists_set(v, body) : fo::forall_set(v, body);
    }
    std::string v = element_var();
    expect(".");
    Formula body = expr();
    if (kw.text == "exists") return fo::exists(v, body);
    if (kw.text == "forall") return fo::forall(v, body);
    return fo::exists_unique(v, body);
  }

  Formula expr() {
    if (at_quantifier()) return quantified();
    return iff();
  }

  Formula iff() {
    Formula lhs = imp();
    if (at_sym("<->")) {
      next();
      return fo::iff(lhs, iff());
    }
    return lhs;
  }

  Formula imp() {
    Formula lhs = disj();
    if (at_sym("->")) {
      next();
      return fo::implies(lhs, imp());
    }
    return lhs;
  }

  Formula disj() {
    Formula lhs = conj();
    while (at_sym("|")) {
      next();
      lhs = fo::disj(lhs, conj());
    }
    return lhs;
  }

  Formula conj() {
    Formula lhs = unary();
    while (at_sym("&")) {
      next();
      lhs = fo::conj(lhs, unary());
    }
    return lhs;
  }

  Formula unary() {
    if (at_sym("!")) {
      next();
      return fo::neg(unary());
    }
    if (at_sym("(")) {
      next();
      Formula f = expr();
      expect(")");
      return f;
    }
    if (at_quantifier()) return quantified();
    return atom();
  }

  Formula atom() {
    if (peek().kind != Token::Ident) fail("formula");
    if (at_ident("true")) {
      next();
      return fo::top();
    }
    if (at_ident("false")) {
      next();
      return fo::bottom();
    }
    // Function-call shaped atoms.
    if (peek(1).kind == Token::Sym && peek(1).text == "(") {
      std::string head = next().text;
      next();
      if (head == "E") {
        std::string x = element_var();
        expect(",");
        std::string y = element_var();
        expect(")");
        return fo::edge(x, y);
      }
      if (head == "dist") {
        std::string x = element_var();
        expect(",");
        std::string y = element_var();
        expect(")");
        if (at_sym("=")) {
          next();
          return fo::dist_eq(x, y, integer());
        }
        if (at_sym("<=")) {
          next();
          return fo::dist_le(x, y, integer());
        }
        fail("'=' or '<='");
      }
      if (head == "deg") {
        std::string x = element_var();
        expect(")");
        expect("=");
        return fo::deg_eq(x, integer());
      }
      std::string x = element_var();
      if (at_sym(")")) {
        next();
        return fo::label(head, x);
      }
      expect(",");
      std::string y = element_var();
      expect(")");
      return fo::rel(head, x, y);
    }
    std::string x = element_var();
    if (at_sym("=")) {
      next();
      return fo::eq(x, element_var());
    }
    if (at_sym("!=")) {
      next();
      return fo::neq(x, element_var());
    }
    if (at_ident("in")) {
      const Token& kw = next();
      if (dialect_ == Dialect::FO)
        throw DialectError("set membership at " + std::to_string(kw.line) + ":" + std::to_string(kw.column) +
                           " is not FO");
      return fo::in(x, set_var());
    }
    fail("'=', '!=' or 'in'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Dialect dialect_;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text, Dialect dialect = Dialect::FO) {
  return detail::Parser(text, dialect).parse();
}

}  // namespace ivfo::logic
