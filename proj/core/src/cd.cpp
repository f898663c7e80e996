#include "mvcheck/cd.hpp"

#include <set>

namespace mvcheck {

std::string Mult::str() const {
  if (unbounded() && lo == 0) return "*";
  if (unbounded()) return std::to_string(lo) + "..*";
  return std::to_string(lo) + ".." + std::to_string(hi);
}

const ClassDef* ClassModel::find_class(const std::string& n) const {
  for (const auto& c : classes)
    if (c.name == n) return &c;
  return nullptr;
}

const AssocDef* ClassModel::find_assoc(const std::string& n) const {
  for (const auto& a : assocs)
    if (a.name == n) return &a;
  return nullptr;
}

std::vector<AttrDef> ClassModel::all_attrs(const std::string& cls) const {
  std::vector<AttrDef> out;
  std::set<std::string> seen;  // cycle guard; cycles are rejected elsewhere
  const ClassDef* c = find_class(cls);
  while (c && seen.insert(c->name).second) {
    for (const auto& a : c->attrs) out.push_back(a);
    c = c->parent.empty() ? nullptr : find_class(c->parent);
  }
  return out;
}

std::vector<ReceptionDef> ClassModel::all_receptions(
    const std::string& cls) const {
  std::vector<ReceptionDef> out;
  std::set<std::string> seen;
  const ClassDef* c = find_class(cls);
  while (c && seen.insert(c->name).second) {
    for (const auto& r : c->receptions) out.push_back(r);
    c = c->parent.empty() ? nullptr : find_class(c->parent);
  }
  return out;
}

const ReceptionDef* ClassModel::find_reception(const std::string& cls,
                                               const std::string& msg) const {
  std::set<std::string> seen;
  const ClassDef* c = find_class(cls);
  while (c && seen.insert(c->name).second) {
    for (const auto& r : c->receptions)
      if (r.name == msg) return &r;
    c = c->parent.empty() ? nullptr : find_class(c->parent);
  }
  return nullptr;
}

bool ClassModel::is_subclass_of(const std::string& cls,
                                const std::string& ancestor) const {
  std::set<std::string> seen;
  const ClassDef* c = find_class(cls);
  while (c && seen.insert(c->name).second) {
    if (c->name == ancestor) return true;
    c = c->parent.empty() ? nullptr : find_class(c->parent);
  }
  return false;
}

// ---- parsing --------------------------------------------------------------

// Bool | Int lo..hi | Enum(a,b,...)
std::optional<Type> parse_type(TokenCursor& cur) {
  if (cur.accept_ident("Bool")) return Type{BoolType{}};
  if (cur.accept_ident("Int")) {
    Token lo = cur.expect(Tok::Int, "lower bound");
    cur.expect(Tok::DotDot, "'..'");
    Token hi = cur.expect(Tok::Int, "upper bound");
    return Type{IntRange{lo.value, hi.value}};
  }
  if (cur.accept_ident("Enum")) {
    cur.expect(Tok::LParen, "'('");
    EnumType et;
    if (!cur.at(Tok::RParen)) {
      et.literals.push_back(cur.expect_ident("enum literal").text);
      while (cur.accept(Tok::Comma))
        et.literals.push_back(cur.expect_ident("enum literal").text);
    }
    cur.expect(Tok::RParen, "')'");
    return Type{et};
  }
  cur.error_here("expected type (Bool, Int lo..hi, or Enum(...))");
  return std::nullopt;
}

namespace {

Mult parse_mult(TokenCursor& cur) {
  Mult m;
  cur.expect(Tok::LBracket, "'['");
  if (cur.accept(Tok::Star)) {
    m.lo = 0;
    m.hi = Mult::kUnbounded;
  } else {
    Token lo = cur.expect(Tok::Int, "multiplicity lower bound");
    m.lo = lo.value;
    cur.expect(Tok::DotDot, "'..'");
    if (cur.accept(Tok::Star))
      m.hi = Mult::kUnbounded;
    else
      m.hi = cur.expect(Tok::Int, "multiplicity upper bound").value;
  }
  cur.expect(Tok::RBracket, "']'");
  return m;
}

std::vector<Param> parse_params(TokenCursor& cur) {
  std::vector<Param> out;
  cur.expect(Tok::LParen, "'('");
  if (!cur.at(Tok::RParen)) {
    do {
      Param p;
      p.name = cur.expect_ident("parameter name").text;
      cur.expect(Tok::Colon, "':'");
      if (auto t = parse_type(cur)) p.type = *t;
      out.push_back(std::move(p));
    } while (cur.accept(Tok::Comma));
  }
  cur.expect(Tok::RParen, "')'");
  return out;
}

void parse_class_body(TokenCursor& cur, ClassDef& c) {
  cur.expect(Tok::LBrace, "'{'");
  while (!cur.at(Tok::RBrace) && !cur.done()) {
    if (cur.accept_ident("attr")) {
      AttrDef a;
      a.name = cur.expect_ident("attribute name").text;
      cur.expect(Tok::Colon, "':'");
      if (auto t = parse_type(cur)) a.type = *t;
      c.attrs.push_back(std::move(a));
    } else if (cur.accept_ident("reception")) {
      ReceptionDef r;
      r.name = cur.expect_ident("reception name").text;
      r.params = parse_params(cur);
      c.receptions.push_back(std::move(r));
    } else if (cur.accept(Tok::Semi)) {
      // separators are optional
    } else {
      cur.error_here("expected 'attr', 'reception', or '}'");
      cur.get();
    }
  }
  cur.expect(Tok::RBrace, "'}'");
}

}  // namespace

ClassModel parse_cd(const std::string& text, Diagnostics& diags) {
  ClassModel m;
  auto toks = lex(text, diags);
  TokenCursor cur(toks, diags);
  cur.expect_keyword("classdiagram");
  m.name = cur.expect_ident("class diagram name").text;
  while (!cur.done()) {
    if (cur.accept_ident("class")) {
      ClassDef c;
      c.line = cur.peek().line;
      c.name = cur.expect_ident("class name").text;
      if (cur.accept_ident("extends"))
        c.parent = cur.expect_ident("superclass name").text;
      parse_class_body(cur, c);
      m.classes.push_back(std::move(c));
    } else if (cur.accept_ident("assoc")) {
      AssocDef a;
      a.line = cur.peek().line;
      a.name = cur.expect_ident("association name").text;
      cur.expect(Tok::Colon, "':'");
      a.a.cls = cur.expect_ident("class name").text;
      a.a.mult = parse_mult(cur);
      a.a.role = cur.expect_ident("role name").text;
      cur.expect(Tok::DashDash, "'--'");
      a.b.role = cur.expect_ident("role name").text;
      a.b.mult = parse_mult(cur);
      a.b.cls = cur.expect_ident("class name").text;
      m.assocs.push_back(std::move(a));
    } else if (cur.accept_ident("inv")) {
      Invariant inv;
      inv.line = cur.peek().line;
      inv.cls = cur.expect_ident("class name").text;
      cur.expect(Tok::Colon, "':'");
      inv.expr = parse_expr(cur);
      m.invariants.push_back(std::move(inv));
    } else if (cur.accept(Tok::Semi)) {
      // skip
    } else {
      cur.error_here("expected 'class', 'assoc', or 'inv'");
      cur.get();
    }
  }
  return m;
}

bool wellformed_cd(const ClassModel& m, Diagnostics& diags) {
  size_t before = diags.items.size();
  std::set<std::string> classNames;
  for (const auto& c : m.classes) {
    if (!classNames.insert(c.name).second)
      diags.error(c.line, 0, "duplicate class '" + c.name + "'",
                  CheckNature::Syntactic, CheckScope::Structural);
    std::set<std::string> attrNames, recNames;
    for (const auto& a : c.attrs) {
      if (!attrNames.insert(a.name).second)
        diags.error(c.line, 0,
                    "duplicate attribute '" + a.name + "' in class " + c.name);
      if (a.type.is_int() && a.type.int_range().lo > a.type.int_range().hi)
        diags.error(c.line, 0, "empty integer range for attribute '" + a.name +
                                   "' in class " + c.name);
      if (a.type.is_enum() && a.type.enum_type().literals.empty())
        diags.error(c.line, 0, "empty enum for attribute '" + a.name +
                                   "' in class " + c.name);
    }
    for (const auto& r : c.receptions)
      if (!recNames.insert(r.name).second)
        diags.error(c.line, 0,
                    "duplicate reception '" + r.name + "' in class " + c.name);
  }
  // single inheritance: parent exists, hierarchy acyclic
  for (const auto& c : m.classes) {
    if (!c.parent.empty() && !m.find_class(c.parent))
      diags.error(c.line, 0, "class '" + c.name + "' extends unknown class '" +
                                 c.parent + "'");
  }
  for (const auto& c : m.classes) {
    std::set<std::string> seen{c.name};
    const ClassDef* p = c.parent.empty() ? nullptr : m.find_class(c.parent);
    while (p) {
      if (!seen.insert(p->name).second) {
        diags.error(c.line, 0, "inheritance cycle through class '" + c.name + "'");
        break;
      }
      p = p->parent.empty() ? nullptr : m.find_class(p->parent);
    }
  }
  std::set<std::string> assocNames;
  for (const auto& a : m.assocs) {
    if (!assocNames.insert(a.name).second)
      diags.error(a.line, 0, "duplicate association '" + a.name + "'");
    for (const AssocEnd* e : {&a.a, &a.b})
      if (!m.find_class(e->cls))
        diags.error(a.line, 0, "association '" + a.name +
                                   "' references unknown class '" + e->cls + "'");
    if (a.a.role == a.b.role)
      diags.error(a.line, 0,
                  "association '" + a.name + "' uses the same role name twice");
    for (const AssocEnd* e : {&a.a, &a.b})
      if (!e->mult.unbounded() && e->mult.lo > e->mult.hi)
        diags.error(a.line, 0, "empty multiplicity " + e->mult.str() +
                                   " on association '" + a.name + "'");
  }
  // invariants: known class, boolean expression over that class's attributes
  for (const auto& inv : m.invariants) {
    if (!m.find_class(inv.cls)) {
      diags.error(inv.line, 0,
                  "invariant on unknown class '" + inv.cls + "'");
      continue;
    }
    ExprContext ctx;
    for (const auto& a : m.all_attrs(inv.cls)) ctx.attrs[a.name] = a.type;
    auto t = typecheck_expr(*inv.expr, ctx, diags);
    if (t && !t->is_bool())
      diags.error(inv.line, 0, "invariant on class '" + inv.cls +
                                   "' is not a boolean expression");
  }
  return diags.items.size() == before;
}

std::string CdSentence::str() const {
  if (kind == Kind::Invariant)
    return "inv " + inv.cls + " : " + inv.expr->str();
  return "mult " + mult.assoc + (mult.at_end_b ? "/b " : "/a ") +
         mult.mult.str();
}

std::vector<CdSentence> cd_sentences(const ClassModel& m) {
  std::vector<CdSentence> out;
  for (const auto& inv : m.invariants) {
    CdSentence s;
    s.kind = CdSentence::Kind::Invariant;
    s.inv = inv;
    out.push_back(std::move(s));
  }
  for (const auto& a : m.assocs) {
    for (bool atB : {false, true}) {
      const Mult& mu = atB ? a.b.mult : a.a.mult;
      if (mu.lo == 0 && mu.unbounded()) continue;  // [*] constrains nothing
      CdSentence s;
      s.kind = CdSentence::Kind::Multiplicity;
      s.mult = {a.name, atB, mu};
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace mvcheck
