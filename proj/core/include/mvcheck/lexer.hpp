#pragma once

#include <string>
#include <vector>

#include "mvcheck/diagnostics.hpp"

namespace mvcheck {

// One token stream serves all five view grammars and the network language.
enum class Tok {
  Ident,
  Int,
  String,      // "..." (library paths)
  Annotation,  // %name
  LBrace, RBrace, LParen, RParen, LBracket, RBracket,
  Colon, Semi, Comma, Dot, DotDot,
  Arrow,      // ->
  DashDash,   // --
  MapsTo,     // |->
  Assign,     // :=
  Eq,         // =
  EqEq, NotEq, Le, Ge, Lt, Gt,
  AndAnd, OrOr, Not,
  Plus, Minus,
  Star,       // * (multiplicity)
  Slash,      // / (effect list)
  End,        // end of input
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long value = 0;  // for Int
  int line = 1;
  int col = 1;
};

// Tokenizes the whole input up front. '//' comments run to end of line.
// Lexical errors are reported into `diags`; the offending character is
// skipped so parsing can continue.
std::vector<Token> lex(const std::string& text, Diagnostics& diags);

// Cursor over a token vector with the usual recursive-descent helpers.
class TokenCursor {
 public:
  TokenCursor(const std::vector<Token>& toks, Diagnostics& diags)
      : toks_(toks), diags_(diags) {}

  const Token& peek(int ahead = 0) const;
  const Token& get();
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const char* word) const;
  bool accept(Tok k);
  bool accept_ident(const char* word);  // keywords are plain identifiers
  // expect* report a diagnostic and return a best-effort token on mismatch.
  Token expect(Tok k, const char* what);
  Token expect_ident(const char* what);
  void expect_keyword(const char* word);
  bool done() const { return at(Tok::End); }
  void error_here(const std::string& msg);
  size_t pos() const { return pos_; }
  void seek(size_t p) { pos_ = p; }

 private:
  const std::vector<Token>& toks_;
  Diagnostics& diags_;
  size_t pos_ = 0;
};

}  // namespace mvcheck
