#include "mvcheck/stm.hpp"

#include <algorithm>
#include <set>

namespace mvcheck {

std::string Effect::str() const {
  if (kind == Kind::Assign) return attr + " := " + value->str();
  std::string out = "send " + target + "." + message + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i]->str();
  }
  return out + ")";
}

std::string MachineTransition::str() const {
  std::string out = src + " -> " + dst + " on " + trigger;
  if (!params.empty()) {
    out += "(";
    for (size_t i = 0; i < params.size(); ++i) {
      if (i) out += ", ";
      out += params[i];
    }
    out += ")";
  }
  if (guard) out += " [" + guard->str() + "]";
  for (size_t i = 0; i < effects.size(); ++i)
    out += (i ? "; " : " / ") + effects[i].str();
  return out;
}

namespace {

Effect parse_effect(TokenCursor& cur) {
  Effect e;
  e.line = cur.peek().line;
  if (cur.accept_ident("send")) {
    e.kind = Effect::Kind::Send;
    e.target = cur.expect_ident("send target").text;
    cur.expect(Tok::Dot, "'.'");
    e.message = cur.expect_ident("message").text;
    cur.expect(Tok::LParen, "'('");
    while (!cur.at(Tok::RParen) && !cur.done()) {
      e.args.push_back(parse_expr(cur));
      if (!cur.accept(Tok::Comma)) break;
    }
    cur.expect(Tok::RParen, "')'");
  } else {
    e.kind = Effect::Kind::Assign;
    e.attr = cur.expect_ident("attribute").text;
    cur.expect(Tok::Assign, "':='");
    e.value = parse_expr(cur);
  }
  return e;
}

// After a ';' an effect continues iff the next tokens are `send` or
// `name :=`; otherwise a new statement (or '}') follows.
bool at_effect(TokenCursor& cur) {
  if (cur.at_ident("send")) return true;
  return cur.at(Tok::Ident) && cur.peek(1).kind == Tok::Assign;
}

MachineTransition parse_transition(TokenCursor& cur) {
  MachineTransition t;
  t.line = cur.peek().line;
  t.src = cur.expect_ident("source state").text;
  cur.expect(Tok::Arrow, "'->'");
  t.dst = cur.expect_ident("target state").text;
  cur.expect_keyword("on");
  t.trigger = cur.expect_ident("trigger message").text;
  if (cur.accept(Tok::LParen)) {
    while (!cur.at(Tok::RParen) && !cur.done()) {
      t.params.push_back(cur.expect_ident("parameter").text);
      if (!cur.accept(Tok::Comma)) break;
    }
    cur.expect(Tok::RParen, "')'");
  }
  if (cur.accept(Tok::LBracket)) {
    t.guard = parse_expr(cur);
    cur.expect(Tok::RBracket, "']'");
  }
  if (cur.accept(Tok::Slash)) {
    t.effects.push_back(parse_effect(cur));
    while (cur.at(Tok::Semi)) {
      // Lookahead past the ';' to tell another effect from the statement end.
      size_t save = cur.pos();
      cur.get();
      if (at_effect(cur)) {
        t.effects.push_back(parse_effect(cur));
      } else {
        cur.seek(save);
        break;
      }
    }
  }
  return t;
}

}  // namespace

StateMachine parse_stm(const std::string& text, Diagnostics& diags) {
  auto toks = lex(text, diags);
  if (!diags.ok()) return {};
  TokenCursor cur(toks, diags);
  StateMachine sm;
  cur.expect_keyword("statemachine");
  sm.line = cur.peek().line;
  sm.name = cur.expect_ident("machine name").text;
  cur.expect_keyword("for");
  sm.contextClass = cur.expect_ident("context class").text;
  cur.expect(Tok::LBrace, "'{'");
  // `init S` declares S implicitly; a later `state S, ...` may name it again.
  bool initialImplicit = false;
  while (!cur.at(Tok::RBrace) && !cur.done() && diags.ok()) {
    if (cur.accept_ident("init")) {
      if (!sm.initial.empty())
        diags.error(cur.peek().line, cur.peek().col, "duplicate init clause");
      sm.initial = cur.expect_ident("initial state").text;
      if (std::find(sm.states.begin(), sm.states.end(), sm.initial) ==
          sm.states.end()) {
        sm.states.push_back(sm.initial);
        initialImplicit = true;
      }
    } else if (cur.accept_ident("state")) {
      do {
        auto tok = cur.expect_ident("state name");
        bool known = std::find(sm.states.begin(), sm.states.end(), tok.text) !=
                     sm.states.end();
        if (known && initialImplicit && tok.text == sm.initial)
          initialImplicit = false;
        else if (known)
          diags.error(tok.line, tok.col, "duplicate state '" + tok.text + "'");
        else
          sm.states.push_back(tok.text);
      } while (cur.accept(Tok::Comma));
    } else {
      sm.transitions.push_back(parse_transition(cur));
    }
    cur.accept(Tok::Semi);
  }
  cur.expect(Tok::RBrace, "'}'");
  if (!diags.ok()) return {};
  return sm;
}

std::vector<std::pair<const AssocDef*, bool>> roles_from(
    const ClassModel& m, const std::string& cls, const std::string& role) {
  std::vector<std::pair<const AssocDef*, bool>> out;
  for (const auto& a : m.assocs) {
    if (a.b.role == role && m.is_subclass_of(cls, a.a.cls))
      out.push_back({&a, true});
    if (a.a.role == role && m.is_subclass_of(cls, a.b.cls))
      out.push_back({&a, false});
  }
  return out;
}

namespace {

void check_call_args(const ReceptionDef& rec, const std::vector<ExprPtr>& args,
                     const ExprContext& ctx, const std::string& what, int line,
                     Diagnostics& diags) {
  if (args.size() != rec.params.size()) {
    diags.error(line, 0,
                what + " '" + rec.name + "' expects " +
                    std::to_string(rec.params.size()) + " argument(s), got " +
                    std::to_string(args.size()));
    return;
  }
  for (size_t i = 0; i < args.size(); ++i) {
    auto t = typecheck_expr(*args[i], ctx, diags);
    if (!t) continue;
    bool ok = (t->is_bool() && rec.params[i].type.is_bool()) ||
              (t->is_int() && rec.params[i].type.is_int()) ||
              (t->is_enum() && rec.params[i].type == *t);
    if (!ok)
      diags.error(args[i]->line, args[i]->col,
                  what + " '" + rec.name + "' argument " +
                      std::to_string(i + 1) + " has type " + t->str() +
                      ", expected " + rec.params[i].type.str());
  }
}

}  // namespace

void wellformed_stm(const StateMachine& sm, const ClassModel& m,
                    Diagnostics& diags) {
  const ClassDef* ctxCls = m.find_class(sm.contextClass);
  if (!ctxCls) {
    diags.error(sm.line, 0,
                "unknown context class '" + sm.contextClass + "'");
    return;
  }
  if (sm.initial.empty())
    diags.error(sm.line, 0, "machine '" + sm.name + "' has no init clause");
  std::set<std::string> declared(sm.states.begin(), sm.states.end());
  ExprContext base;
  for (const auto& a : m.all_attrs(sm.contextClass)) base.attrs[a.name] = a.type;

  for (const auto& t : sm.transitions) {
    for (const auto& s : {t.src, t.dst})
      if (!declared.count(s))
        diags.error(t.line, 0, "transition uses undeclared state '" + s + "'");
    const ReceptionDef* rec = m.find_reception(sm.contextClass, t.trigger);
    if (!rec) {
      diags.error(t.line, 0,
                  "trigger '" + t.trigger + "' is not a reception of class '" +
                      sm.contextClass + "'");
      continue;
    }
    if (t.params.size() != rec->params.size()) {
      diags.error(t.line, 0,
                  "trigger '" + t.trigger + "' has " +
                      std::to_string(rec->params.size()) +
                      " parameter(s), pattern names " +
                      std::to_string(t.params.size()));
      continue;
    }
    ExprContext ctx = base;
    std::set<std::string> seen;
    for (size_t i = 0; i < t.params.size(); ++i) {
      if (!seen.insert(t.params[i]).second)
        diags.error(t.line, 0, "duplicate parameter '" + t.params[i] + "'");
      ctx.params[t.params[i]] = rec->params[i].type;
    }
    if (t.guard) {
      auto g = typecheck_expr(*t.guard, ctx, diags);
      if (g && !g->is_bool())
        diags.error(t.guard->line, t.guard->col, "guard must be Bool");
    }
    for (const auto& e : t.effects) {
      if (e.kind == Effect::Kind::Assign) {
        const AttrDef* attr = nullptr;
        for (const auto& a : m.all_attrs(sm.contextClass))
          if (a.name == e.attr) attr = &a;
        if (!attr) {
          diags.error(e.line, 0,
                      "assignment to unknown attribute '" + e.attr + "'");
          continue;
        }
        auto vt = typecheck_expr(*e.value, ctx, diags);
        if (!vt) continue;
        bool ok = (vt->is_bool() && attr->type.is_bool()) ||
                  (vt->is_int() && attr->type.is_int()) ||
                  (vt->is_enum() && attr->type == *vt);
        if (!ok)
          diags.error(e.line, 0,
                      "assignment to '" + e.attr + "' has type " + vt->str() +
                          ", expected " + attr->type.str());
      } else {
        if (e.target == "env") {
          // The message must be a reception somewhere; preferred home is the
          // context class itself (the sd2cd projection attributes messages
          // received by the environment to their sender's class).
          const ReceptionDef* r = m.find_reception(sm.contextClass, e.message);
          if (!r) {
            for (const auto& c : m.classes)
              if (!r) r = m.find_reception(c.name, e.message);
          }
          if (!r) {
            diags.error(e.line, 0,
                        "env send: message '" + e.message +
                            "' is not a reception of any class");
            continue;
          }
          check_call_args(*r, e.args, ctx, "message", e.line, diags);
        } else {
          auto routes = roles_from(m, sm.contextClass, e.target);
          if (routes.empty()) {
            diags.error(e.line, 0,
                        "send target '" + e.target +
                            "' is not an association role navigable from '" +
                            sm.contextClass + "' (or env)");
            continue;
          }
          for (const auto& [assoc, atA] : routes) {
            const std::string& partner = atA ? assoc->b.cls : assoc->a.cls;
            const ReceptionDef* r = m.find_reception(partner, e.message);
            if (!r) {
              diags.error(e.line, 0,
                          "message '" + e.message +
                              "' is not a reception of class '" + partner +
                              "' (role '" + e.target + "')");
              continue;
            }
            check_call_args(*r, e.args, ctx, "message", e.line, diags);
          }
        }
      }
    }
  }
}

std::vector<std::string> stm_sentences(const StateMachine& sm) {
  std::vector<std::string> out;
  out.push_back("init " + sm.name + " : " + sm.initial);
  for (const auto& t : sm.transitions)
    out.push_back("trans " + sm.name + " : " + t.str());
  return out;
}

}  // namespace mvcheck
