#include "mvcheck/lexer.hpp"

#include <cctype>

namespace mvcheck {

const char* to_string(CheckNature n) {
  return n == CheckNature::Syntactic ? "syntactic" : "semantic";
}
const char* to_string(CheckScope s) {
  return s == CheckScope::Structural ? "structural" : "behavioural";
}
const char* to_string(CheckDirection d) {
  return d == CheckDirection::Horizontal ? "horizontal" : "vertical";
}

std::string Diagnostic::str() const {
  std::string out;
  switch (severity) {
    case Severity::Error: out = "error"; break;
    case Severity::Warning: out = "warning"; break;
    case Severity::Note: out = "note"; break;
  }
  if (line > 0) out += " at " + std::to_string(line) + ":" + std::to_string(col);
  out += ": " + message;
  return out;
}

std::string Diagnostics::str() const {
  std::string out;
  for (const auto& d : items) {
    out += d.str();
    out += '\n';
  }
  return out;
}

std::vector<Token> lex(const std::string& text, Diagnostics& diags) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
  };
  auto peek2 = [&](char a, char b) {
    return i + 1 < text.size() && text[i] == a && text[i + 1] == b;
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(1); continue; }
    if (peek2('/', '/')) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum((unsigned char)text[j]) || text[j] == '_'))
        ++j;
      t.kind = Tok::Ident;
      t.text = text.substr(i, j - i);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      while (j < text.size() && std::isdigit((unsigned char)text[j])) ++j;
      t.kind = Tok::Int;
      t.text = text.substr(i, j - i);
      t.value = std::stoll(t.text);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (c == '"') {
      size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"') {
        diags.error(line, col, "unterminated string literal");
        advance(j - i);
        continue;
      }
      t.kind = Tok::String;
      t.text = text.substr(i + 1, j - i - 1);
      advance(j - i + 1);
      out.push_back(t);
      continue;
    }
    if (c == '%') {
      size_t j = i + 1;
      while (j < text.size() &&
             (std::isalnum((unsigned char)text[j]) || text[j] == '_'))
        ++j;
      if (j == i + 1) {
        diags.error(line, col, "stray '%'");
        advance(1);
        continue;
      }
      t.kind = Tok::Annotation;
      t.text = text.substr(i + 1, j - i - 1);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    // multi-char punctuation first
    struct P { const char* s; Tok k; };
    static const P multi[] = {
        {"|->", Tok::MapsTo}, {"->", Tok::Arrow},  {"--", Tok::DashDash},
        {"..", Tok::DotDot},  {":=", Tok::Assign}, {"==", Tok::EqEq},
        {"!=", Tok::NotEq},   {"<=", Tok::Le},     {">=", Tok::Ge},
        {"&&", Tok::AndAnd},  {"||", Tok::OrOr},
    };
    bool matched = false;
    for (const auto& p : multi) {
      size_t n = std::string(p.s).size();
      if (text.compare(i, n, p.s) == 0) {
        t.kind = p.k;
        t.text = p.s;
        advance(n);
        out.push_back(t);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    switch (c) {
      case '{': t.kind = Tok::LBrace; break;
      case '}': t.kind = Tok::RBrace; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '[': t.kind = Tok::LBracket; break;
      case ']': t.kind = Tok::RBracket; break;
      case ':': t.kind = Tok::Colon; break;
      case ';': t.kind = Tok::Semi; break;
      case ',': t.kind = Tok::Comma; break;
      case '.': t.kind = Tok::Dot; break;
      case '=': t.kind = Tok::Eq; break;
      case '<': t.kind = Tok::Lt; break;
      case '>': t.kind = Tok::Gt; break;
      case '!': t.kind = Tok::Not; break;
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      default:
        diags.error(line, col, std::string("unexpected character '") + c + "'");
        advance(1);
        continue;
    }
    t.text = std::string(1, c);
    advance(1);
    out.push_back(t);
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const Token& TokenCursor::peek(int ahead) const {
  size_t p = pos_ + (size_t)ahead;
  if (p >= toks_.size()) p = toks_.size() - 1;
  return toks_[p];
}

const Token& TokenCursor::get() {
  const Token& t = toks_[pos_];
  if (pos_ + 1 < toks_.size()) ++pos_;
  return t;
}

bool TokenCursor::at_ident(const char* word) const {
  return at(Tok::Ident) && peek().text == word;
}

bool TokenCursor::accept(Tok k) {
  if (at(k)) { get(); return true; }
  return false;
}

bool TokenCursor::accept_ident(const char* word) {
  if (at_ident(word)) { get(); return true; }
  return false;
}

Token TokenCursor::expect(Tok k, const char* what) {
  if (at(k)) return get();
  diags_.error(peek().line, peek().col,
               std::string("expected ") + what + ", got '" +
                   (peek().kind == Tok::End ? "<end>" : peek().text) + "'");
  return peek();
}

Token TokenCursor::expect_ident(const char* what) {
  return expect(Tok::Ident, what);
}

void TokenCursor::expect_keyword(const char* word) {
  if (!accept_ident(word)) {
    diags_.error(peek().line, peek().col,
                 std::string("expected '") + word + "', got '" +
                     (peek().kind == Tok::End ? "<end>" : peek().text) + "'");
  }
}

void TokenCursor::error_here(const std::string& msg) {
  diags_.error(peek().line, peek().col, msg);
}

}  // namespace mvcheck
