#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "papal/errors.hpp"
#include "papal/formula.hpp"

namespace papal {

namespace detail {

enum class Tok {
  End,
  Ident,
  Not,
  And,
  Or,
  Implies,
  Iff,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LAngle,
  RAngle,
  KwK,
  KwL,
  KwBox,
  KwDia,
  KwBoxPos,
  KwDiaPos,
  KwTrue,
  KwFalse,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      advance(1);
      continue;
    }
    const std::size_t l0 = line;
    const std::size_t c0 = col;
    auto emit = [&](Tok k, std::size_t n) {
      out.push_back({k, std::string(src.substr(i, n)), l0, c0});
      advance(n);
    };
    if (src.substr(i, 3) == "<->") {
      emit(Tok::Iff, 3);
    } else if (src.substr(i, 2) == "->") {
      emit(Tok::Implies, 2);
    } else if (c == '~') {
      emit(Tok::Not, 1);
    } else if (c == '&') {
      emit(Tok::And, 1);
    } else if (c == '|') {
      emit(Tok::Or, 1);
    } else if (c == '(') {
      emit(Tok::LParen, 1);
    } else if (c == ')') {
      emit(Tok::RParen, 1);
    } else if (c == '[') {
      emit(Tok::LBrack, 1);
    } else if (c == ']') {
      emit(Tok::RBrack, 1);
    } else if (c == '<') {
      emit(Tok::LAngle, 1);
    } else if (c == '>') {
      emit(Tok::RAngle, 1);
    } else if (ident_start(c)) {
      std::size_t n = 1;
      while (i + n < src.size() && ident_char(src[i + n])) ++n;
      const std::string_view word = src.substr(i, n);
      if ((word == "box" || word == "dia") && i + n < src.size() && src[i + n] == '+') {
        emit(word == "box" ? Tok::KwBoxPos : Tok::KwDiaPos, n + 1);
      } else if (word == "K") {
        emit(Tok::KwK, n);
      } else if (word == "L") {
        emit(Tok::KwL, n);
      } else if (word == "box") {
        emit(Tok::KwBox, n);
      } else if (word == "dia") {
        emit(Tok::KwDia, n);
      } else if (word == "true") {
        emit(Tok::KwTrue, n);
      } else if (word == "false") {
        emit(Tok::KwFalse, n);
      } else {
        emit(Tok::Ident, n);
      }
    } else {
      throw ParseError(l0, c0, {}, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Formula parse_all() {
    Formula f = parse_iff();
    if (peek().kind != Tok::End) fail({"end of input", "&", "|", "->", "<->"});
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    const std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, std::move(expected), "unexpected " + got);
  }

  void expect(Tok k, const char* what) {
    if (!accept(k)) fail({what});
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    while (accept(Tok::Iff)) lhs = iff(lhs, parse_implies());
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept(Tok::Implies)) return implies(lhs, parse_implies());
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (accept(Tok::Or)) lhs = disj(lhs, parse_and());
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (accept(Tok::And)) lhs = conj(lhs, parse_unary());
    return lhs;
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not:
        take();
        return neg(parse_unary());
      case Tok::KwK:
      case Tok::KwL: {
        const bool k = take().kind == Tok::KwK;
        if (peek().kind != Tok::Ident) fail({"agent name"});
        std::string agent = take().text;
        Formula body = parse_unary();
        return k ? know(std::move(agent), std::move(body)) : poss(std::move(agent), std::move(body));
      }
      case Tok::KwBox:
        take();
        return box(parse_unary());
      case Tok::KwDia:
        take();
        return dia(parse_unary());
      case Tok::KwBoxPos:
        take();
        return box_pos(parse_unary());
      case Tok::KwDiaPos:
        take();
        return dia_pos(parse_unary());
      case Tok::LBrack: {
        take();
        Formula what = parse_iff();
        expect(Tok::RBrack, "']'");
        return announce(std::move(what), parse_unary());
      }
      case Tok::LAngle: {
        take();
        Formula what = parse_iff();
        expect(Tok::RAngle, "'>'");
        return announce_dual(std::move(what), parse_unary());
      }
      default:
        return parse_atomic();
    }
  }

  Formula parse_atomic() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwTrue:
        take();
        return top();
      case Tok::KwFalse:
        take();
        return bottom();
      case Tok::Ident: {
        if (std::islower(static_cast<unsigned char>(t.text[0])) == 0)
          throw ParseError(t.line, t.column, {"atom"},
                           "atom names start with a lowercase letter: '" + t.text + "'");
        return atom(take().text);
      }
      case Tok::LParen: {
        take();
        Formula f = parse_iff();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        fail({"atom", "true", "false", "(", "~", "K", "L", "[", "<", "box", "dia", "box+", "dia+"});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a formula. Throws ParseError with position and expected tokens.
inline Formula parse(std::string_view text) { return detail::Parser(text).parse_all(); }

}  // namespace papal
