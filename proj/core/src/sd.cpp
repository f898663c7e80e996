#include "mvcheck/sd.hpp"

#include <algorithm>
#include <functional>

namespace mvcheck {

std::string ArgPattern::str() const {
  switch (kind) {
    case Kind::Literal:
      return value_str(literal);
    case Kind::Wildcard:
      return "_";
    case Kind::Variable:
      return declaredType ? var + ": " + declaredType->str() : var;
  }
  return "";
}

std::string SdMessage::str() const {
  std::string out = "msg " + from + " -> " + to + " : " + message;
  if (!args.empty()) {
    out += "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      out += args[i].str();
    }
    out += ")";
  }
  return out;
}

std::string InteractionTerm::str() const {
  switch (kind) {
    case Kind::Msg:
      return msg.str();
    case Kind::Seq: {
      std::string out;
      for (const auto& c : children) {
        if (!out.empty()) out += "; ";
        out += c->str();
      }
      return out;
    }
    case Kind::Alt: {
      std::string out;
      for (size_t i = 0; i < children.size(); ++i)
        out += std::string(i ? " else { " : "alt { ") + children[i]->str() +
               " }";
      return out;
    }
    case Kind::Opt:
      return "opt { " + children[0]->str() + " }";
    case Kind::Loop:
      return "loop(" + std::to_string(lo) + ", " + std::to_string(hi) + ") { " +
             children[0]->str() + " }";
  }
  return "";
}

const Lifeline* InteractionModel::find_lifeline(const std::string& n) const {
  for (const auto& l : lifelines)
    if (l.name == n) return &l;
  return nullptr;
}

namespace {

ArgPattern parse_pattern(TokenCursor& cur) {
  ArgPattern p;
  if (cur.at(Tok::Int)) {
    p.kind = ArgPattern::Kind::Literal;
    p.literal = cur.get().value;
    return p;
  }
  if (cur.accept(Tok::Minus)) {
    p.kind = ArgPattern::Kind::Literal;
    p.literal = -cur.expect(Tok::Int, "integer").value;
    return p;
  }
  if (cur.accept_ident("true")) {
    p.kind = ArgPattern::Kind::Literal;
    p.literal = true;
    return p;
  }
  if (cur.accept_ident("false")) {
    p.kind = ArgPattern::Kind::Literal;
    p.literal = false;
    return p;
  }
  Token name = cur.expect_ident("argument pattern");
  if (name.text == "_") {
    p.kind = ArgPattern::Kind::Wildcard;
    return p;
  }
  p.kind = ArgPattern::Kind::Variable;
  p.var = name.text;
  if (cur.accept(Tok::Colon)) p.declaredType = parse_type(cur);
  return p;
}

TermPtr parse_body(TokenCursor& cur, Diagnostics& diags);

TermPtr parse_item(TokenCursor& cur, Diagnostics& diags) {
  auto term = std::make_shared<InteractionTerm>();
  term->line = cur.peek().line;
  if (cur.accept_ident("msg")) {
    term->kind = InteractionTerm::Kind::Msg;
    term->msg.line = term->line;
    term->msg.from = cur.expect_ident("sender").text;
    cur.expect(Tok::Arrow, "'->'");
    term->msg.to = cur.expect_ident("receiver").text;
    cur.expect(Tok::Colon, "':'");
    term->msg.message = cur.expect_ident("message").text;
    if (cur.accept(Tok::LParen)) {
      while (!cur.at(Tok::RParen) && !cur.done()) {
        term->msg.args.push_back(parse_pattern(cur));
        if (!cur.accept(Tok::Comma)) break;
      }
      cur.expect(Tok::RParen, "')'");
    }
  } else if (cur.accept_ident("alt")) {
    term->kind = InteractionTerm::Kind::Alt;
    cur.expect(Tok::LBrace, "'{'");
    term->children.push_back(parse_body(cur, diags));
    cur.expect(Tok::RBrace, "'}'");
    while (cur.accept_ident("else")) {
      cur.expect(Tok::LBrace, "'{'");
      term->children.push_back(parse_body(cur, diags));
      cur.expect(Tok::RBrace, "'}'");
    }
    if (term->children.size() < 2)
      diags.error(term->line, 0, "alt needs at least one else branch");
  } else if (cur.accept_ident("opt")) {
    term->kind = InteractionTerm::Kind::Opt;
    cur.expect(Tok::LBrace, "'{'");
    term->children.push_back(parse_body(cur, diags));
    cur.expect(Tok::RBrace, "'}'");
  } else if (cur.accept_ident("loop")) {
    term->kind = InteractionTerm::Kind::Loop;
    cur.expect(Tok::LParen, "'('");
    term->lo = cur.expect(Tok::Int, "loop lower bound").value;
    cur.expect(Tok::Comma, "','");
    term->hi = cur.expect(Tok::Int, "loop upper bound").value;
    cur.expect(Tok::RParen, "')'");
    cur.expect(Tok::LBrace, "'{'");
    term->children.push_back(parse_body(cur, diags));
    cur.expect(Tok::RBrace, "'}'");
    if (term->lo > term->hi)
      diags.error(term->line, 0, "loop bounds out of order: " +
                                     std::to_string(term->lo) + " > " +
                                     std::to_string(term->hi));
  } else {
    cur.error_here("expected msg, alt, opt, or loop");
  }
  return term;
}

TermPtr parse_body(TokenCursor& cur, Diagnostics& diags) {
  auto seq = std::make_shared<InteractionTerm>();
  seq->kind = InteractionTerm::Kind::Seq;
  seq->line = cur.peek().line;
  while (!cur.at(Tok::RBrace) && !cur.done() && diags.ok()) {
    seq->children.push_back(parse_item(cur, diags));
    cur.accept(Tok::Semi);
  }
  return seq;
}

void walk(const TermPtr& t, const std::function<void(const InteractionTerm&)>& f) {
  if (!t) return;
  f(*t);
  for (const auto& c : t->children) walk(c, f);
}

}  // namespace

InteractionModel parse_sd(const std::string& text, Diagnostics& diags) {
  auto toks = lex(text, diags);
  if (!diags.ok()) return {};
  TokenCursor cur(toks, diags);
  InteractionModel sd;
  cur.expect_keyword("interaction");
  sd.line = cur.peek().line;
  sd.name = cur.expect_ident("interaction name").text;
  cur.expect(Tok::LBrace, "'{'");
  auto seq = std::make_shared<InteractionTerm>();
  seq->kind = InteractionTerm::Kind::Seq;
  while (!cur.at(Tok::RBrace) && !cur.done() && diags.ok()) {
    if (cur.accept_ident("lifeline")) {
      Lifeline l;
      l.line = cur.peek().line;
      l.name = cur.expect_ident("lifeline name").text;
      cur.expect(Tok::Colon, "':'");
      l.cls = cur.expect_ident("lifeline class").text;
      sd.lifelines.push_back(std::move(l));
    } else {
      seq->children.push_back(parse_item(cur, diags));
    }
    cur.accept(Tok::Semi);
  }
  cur.expect(Tok::RBrace, "'}'");
  sd.root = seq;
  if (!diags.ok()) return {};
  return sd;
}

void wellformed_sd(const InteractionModel& sd, Diagnostics& diags) {
  std::set<std::string> names;
  for (const auto& l : sd.lifelines) {
    if (l.name == "env")
      diags.error(l.line, 0, "'env' is reserved for the environment");
    if (!names.insert(l.name).second)
      diags.error(l.line, 0, "duplicate lifeline '" + l.name + "'");
  }
  walk(sd.root, [&](const InteractionTerm& t) {
    if (t.kind != InteractionTerm::Kind::Msg) return;
    for (const auto& end : {t.msg.from, t.msg.to})
      if (end != "env" && !names.count(end))
        diags.error(t.msg.line, 0, "unknown lifeline '" + end + "'");
    if (t.msg.from == "env" && t.msg.to == "env")
      diags.error(t.msg.line, 0, "message between env and env");
  });
  sd_var_types(sd, &diags);
}

std::set<std::string> sd_messages(const InteractionModel& sd) {
  std::set<std::string> out;
  walk(sd.root, [&](const InteractionTerm& t) {
    if (t.kind == InteractionTerm::Kind::Msg) out.insert(t.msg.message);
  });
  return out;
}

std::map<std::string, Type> sd_var_types(const InteractionModel& sd,
                                         Diagnostics* diags) {
  std::map<std::string, Type> out;
  walk(sd.root, [&](const InteractionTerm& t) {
    if (t.kind != InteractionTerm::Kind::Msg) return;
    for (const auto& a : t.msg.args) {
      if (a.kind != ArgPattern::Kind::Variable || !a.declaredType) continue;
      auto it = out.find(a.var);
      if (it == out.end()) {
        out[a.var] = *a.declaredType;
      } else if (!(it->second == *a.declaredType) && diags) {
        diags->error(t.msg.line, 0,
                     "variable '" + a.var + "' re-declared with type " +
                         a.declaredType->str() + " (was " + it->second.str() +
                         ")");
      }
    }
  });
  return out;
}

std::map<std::string, std::vector<std::optional<Type>>> sd_message_sig(
    const InteractionModel& sd) {
  std::map<std::string, std::vector<std::optional<Type>>> out;
  std::map<std::string, Type> vars = sd_var_types(sd, nullptr);
  walk(sd.root, [&](const InteractionTerm& t) {
    if (t.kind != InteractionTerm::Kind::Msg) return;
    auto& slots = out[t.msg.message];
    if (slots.size() < t.msg.args.size()) slots.resize(t.msg.args.size());
    for (size_t i = 0; i < t.msg.args.size(); ++i) {
      if (slots[i]) continue;
      const ArgPattern& p = t.msg.args[i];
      if (p.kind == ArgPattern::Kind::Variable) {
        auto it = vars.find(p.var);
        if (it != vars.end()) slots[i] = it->second;
      } else if (p.kind == ArgPattern::Kind::Literal &&
                 std::holds_alternative<bool>(p.literal)) {
        slots[i] = Type{BoolType{}};
      }
    }
  });
  return out;
}

namespace {

void render(const TermPtr& t, std::string& out, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  switch (t->kind) {
    case InteractionTerm::Kind::Msg:
      out += pad + t->msg.str() + ";\n";
      break;
    case InteractionTerm::Kind::Seq:
      for (const auto& c : t->children) render(c, out, indent);
      break;
    case InteractionTerm::Kind::Alt:
      for (size_t i = 0; i < t->children.size(); ++i) {
        out += pad + (i ? "else {" : "alt {") + "\n";
        render(t->children[i], out, indent + 1);
        out += pad + "}\n";
      }
      break;
    case InteractionTerm::Kind::Opt:
      out += pad + "opt {\n";
      render(t->children[0], out, indent + 1);
      out += pad + "}\n";
      break;
    case InteractionTerm::Kind::Loop:
      out += pad + "loop(" + std::to_string(t->lo) + ", " +
             std::to_string(t->hi) + ") {\n";
      render(t->children[0], out, indent + 1);
      out += pad + "}\n";
      break;
  }
}

}  // namespace

std::string sd_text(const InteractionModel& sd) {
  std::string out = "interaction " + sd.name + " {\n";
  for (const auto& l : sd.lifelines)
    out += "  lifeline " + l.name + ": " + l.cls + ";\n";
  render(sd.root, out, 1);
  out += "}\n";
  return out;
}

}  // namespace mvcheck
