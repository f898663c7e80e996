#include "mvcheck/expr.hpp"

namespace mvcheck {

bool Type::operator==(const Type& o) const {
  if (v.index() != o.v.index()) return false;
  if (is_int()) return int_range() == o.int_range();
  if (is_enum()) return enum_type() == o.enum_type();
  return true;
}

std::string Type::str() const {
  if (is_bool()) return "Bool";
  if (is_int())
    return "Int " + std::to_string(int_range().lo) + ".." +
           std::to_string(int_range().hi);
  std::string s = "Enum(";
  const auto& ls = enum_type().literals;
  for (size_t i = 0; i < ls.size(); ++i) {
    if (i) s += ",";
    s += ls[i];
  }
  return s + ")";
}

std::string value_str(const Value& v) {
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  if (std::holds_alternative<long long>(v))
    return std::to_string(std::get<long long>(v));
  return std::get<std::string>(v);
}

bool value_in_type(const Value& v, const Type& t) {
  if (t.is_bool()) return std::holds_alternative<bool>(v);
  if (t.is_int()) {
    if (!std::holds_alternative<long long>(v)) return false;
    long long x = std::get<long long>(v);
    return x >= t.int_range().lo && x <= t.int_range().hi;
  }
  if (!std::holds_alternative<std::string>(v)) return false;
  const auto& ls = t.enum_type().literals;
  for (const auto& l : ls)
    if (l == std::get<std::string>(v)) return true;
  return false;
}

std::vector<Value> type_values(const Type& t) {
  std::vector<Value> out;
  if (t.is_bool()) {
    out.push_back(false);
    out.push_back(true);
  } else if (t.is_int()) {
    for (long long x = t.int_range().lo; x <= t.int_range().hi; ++x)
      out.push_back(x);
  } else {
    for (const auto& l : t.enum_type().literals) out.push_back(l);
  }
  return out;
}

std::string Expr::str() const {
  switch (kind) {
    case Kind::BoolLit: return std::get<bool>(value) ? "true" : "false";
    case Kind::IntLit: return std::to_string(std::get<long long>(value));
    case Kind::Name: return text;
    case Kind::SelfAttr: return "self." + text;
    case Kind::Unary: return op + lhs->str();
    case Kind::Binary: return "(" + lhs->str() + " " + op + " " + rhs->str() + ")";
  }
  return "?";
}

// ---- recursive-descent parser -------------------------------------------
// expr   := orx
// orx    := andx ('||' andx)*
// andx   := cmp ('&&' cmp)*
// cmp    := add (('=='|'!='|'<'|'<='|'>'|'>=') add)?
// add    := unary (('+'|'-') unary)*
// unary  := '!' unary | '-' unary | prim
// prim   := 'true' | 'false' | INT | 'self' '.' IDENT | IDENT | '(' expr ')'

namespace {

ExprPtr mk(Expr e) { return std::make_shared<Expr>(std::move(e)); }

ExprPtr parse_or(TokenCursor& cur);

ExprPtr parse_prim(TokenCursor& cur) {
  Expr e;
  e.line = cur.peek().line;
  e.col = cur.peek().col;
  if (cur.accept_ident("true")) {
    e.kind = Expr::Kind::BoolLit;
    e.value = true;
    return mk(e);
  }
  if (cur.accept_ident("false")) {
    e.kind = Expr::Kind::BoolLit;
    e.value = false;
    return mk(e);
  }
  if (cur.at(Tok::Int)) {
    e.kind = Expr::Kind::IntLit;
    e.value = cur.get().value;
    return mk(e);
  }
  if (cur.at_ident("self")) {
    cur.get();
    cur.expect(Tok::Dot, "'.' after self");
    e.kind = Expr::Kind::SelfAttr;
    e.text = cur.expect_ident("attribute name").text;
    return mk(e);
  }
  if (cur.at(Tok::Ident)) {
    e.kind = Expr::Kind::Name;
    e.text = cur.get().text;
    return mk(e);
  }
  if (cur.accept(Tok::LParen)) {
    ExprPtr inner = parse_or(cur);
    cur.expect(Tok::RParen, "')'");
    return inner;
  }
  cur.error_here("expected expression");
  e.kind = Expr::Kind::BoolLit;
  e.value = false;
  return mk(e);
}

ExprPtr parse_unary(TokenCursor& cur) {
  if (cur.at(Tok::Not) || cur.at(Tok::Minus)) {
    Expr e;
    e.line = cur.peek().line;
    e.col = cur.peek().col;
    e.kind = Expr::Kind::Unary;
    e.op = cur.get().text;
    e.lhs = parse_unary(cur);
    return mk(e);
  }
  return parse_prim(cur);
}

ExprPtr parse_add(TokenCursor& cur) {
  ExprPtr lhs = parse_unary(cur);
  while (cur.at(Tok::Plus) || cur.at(Tok::Minus)) {
    Expr e;
    e.line = cur.peek().line;
    e.col = cur.peek().col;
    e.kind = Expr::Kind::Binary;
    e.op = cur.get().text;
    e.lhs = lhs;
    e.rhs = parse_unary(cur);
    lhs = mk(e);
  }
  return lhs;
}

ExprPtr parse_cmp(TokenCursor& cur) {
  ExprPtr lhs = parse_add(cur);
  if (cur.at(Tok::EqEq) || cur.at(Tok::NotEq) || cur.at(Tok::Lt) ||
      cur.at(Tok::Le) || cur.at(Tok::Gt) || cur.at(Tok::Ge)) {
    Expr e;
    e.line = cur.peek().line;
    e.col = cur.peek().col;
    e.kind = Expr::Kind::Binary;
    e.op = cur.get().text;
    e.lhs = lhs;
    e.rhs = parse_add(cur);
    return mk(e);
  }
  return lhs;
}

ExprPtr parse_and(TokenCursor& cur) {
  ExprPtr lhs = parse_cmp(cur);
  while (cur.at(Tok::AndAnd)) {
    Expr e;
    e.line = cur.peek().line;
    e.col = cur.peek().col;
    e.kind = Expr::Kind::Binary;
    e.op = cur.get().text;
    e.lhs = lhs;
    e.rhs = parse_cmp(cur);
    lhs = mk(e);
  }
  return lhs;
}

ExprPtr parse_or(TokenCursor& cur) {
  ExprPtr lhs = parse_and(cur);
  while (cur.at(Tok::OrOr)) {
    Expr e;
    e.line = cur.peek().line;
    e.col = cur.peek().col;
    e.kind = Expr::Kind::Binary;
    e.op = cur.get().text;
    e.lhs = lhs;
    e.rhs = parse_and(cur);
    lhs = mk(e);
  }
  return lhs;
}

std::optional<Type> resolve_enum_literal(const std::string& name,
                                         const ExprContext& ctx) {
  // A bare name that is not a parameter may denote an enum literal of any
  // enum type in scope; ambiguity across distinct enum types is rejected
  // by typecheck only when the uses disagree.
  for (const auto& [_, t] : ctx.params)
    if (t.is_enum())
      for (const auto& l : t.enum_type().literals)
        if (l == name) return t;
  for (const auto& [_, t] : ctx.attrs)
    if (t.is_enum())
      for (const auto& l : t.enum_type().literals)
        if (l == name) return t;
  return std::nullopt;
}

}  // namespace

ExprPtr parse_expr(TokenCursor& cur) { return parse_or(cur); }

std::optional<Type> typecheck_expr(const Expr& e, const ExprContext& ctx,
                                   Diagnostics& diags) {
  auto fail = [&](const std::string& msg) -> std::optional<Type> {
    diags.error(e.line, e.col, msg, CheckNature::Syntactic,
                CheckScope::Structural);
    return std::nullopt;
  };
  switch (e.kind) {
    case Expr::Kind::BoolLit:
      return Type{BoolType{}};
    case Expr::Kind::IntLit:
      // Literal ints get the widest range; comparisons only need int-ness.
      return Type{IntRange{std::get<long long>(e.value),
                           std::get<long long>(e.value)}};
    case Expr::Kind::Name: {
      auto it = ctx.params.find(e.text);
      if (it != ctx.params.end()) return it->second;
      if (auto t = resolve_enum_literal(e.text, ctx)) return t;
      return fail("unknown name '" + e.text + "' in expression");
    }
    case Expr::Kind::SelfAttr: {
      auto it = ctx.attrs.find(e.text);
      if (it == ctx.attrs.end())
        return fail("unknown attribute 'self." + e.text + "'");
      return it->second;
    }
    case Expr::Kind::Unary: {
      auto t = typecheck_expr(*e.lhs, ctx, diags);
      if (!t) return std::nullopt;
      if (e.op == "!") {
        if (!t->is_bool()) return fail("'!' needs a Bool operand");
        return t;
      }
      if (!t->is_int()) return fail("unary '-' needs an Int operand");
      return Type{IntRange{-t->int_range().hi, -t->int_range().lo}};
    }
    case Expr::Kind::Binary: {
      auto lt = typecheck_expr(*e.lhs, ctx, diags);
      auto rt = typecheck_expr(*e.rhs, ctx, diags);
      if (!lt || !rt) return std::nullopt;
      if (e.op == "&&" || e.op == "||") {
        if (!lt->is_bool() || !rt->is_bool())
          return fail("'" + e.op + "' needs Bool operands");
        return Type{BoolType{}};
      }
      if (e.op == "+" || e.op == "-") {
        if (!lt->is_int() || !rt->is_int())
          return fail("'" + e.op + "' needs Int operands");
        // Intermediate results may leave any declared range.
        return Type{IntRange{lt->int_range().lo - rt->int_range().hi,
                             lt->int_range().hi + rt->int_range().hi}};
      }
      if (e.op == "==" || e.op == "!=") {
        bool comparable = (lt->is_bool() && rt->is_bool()) ||
                          (lt->is_int() && rt->is_int()) ||
                          (lt->is_enum() && rt->is_enum() &&
                           lt->enum_type() == rt->enum_type());
        if (!comparable)
          return fail("'" + e.op + "' operands have incompatible types (" +
                      lt->str() + " vs " + rt->str() + ")");
        return Type{BoolType{}};
      }
      // ordered comparisons
      if (!lt->is_int() || !rt->is_int())
        return fail("'" + e.op + "' needs Int operands");
      return Type{BoolType{}};
    }
  }
  return std::nullopt;
}

Value eval_expr(const Expr& e, const ExprEnv& env) {
  switch (e.kind) {
    case Expr::Kind::BoolLit:
    case Expr::Kind::IntLit:
      return e.value;
    case Expr::Kind::Name: {
      if (env.params) {
        auto it = env.params->find(e.text);
        if (it != env.params->end()) return it->second;
      }
      return e.text;  // enum literal
    }
    case Expr::Kind::SelfAttr: {
      auto it = env.attrs->find(e.text);
      return it->second;
    }
    case Expr::Kind::Unary: {
      Value v = eval_expr(*e.lhs, env);
      if (e.op == "!") return !std::get<bool>(v);
      return -std::get<long long>(v);
    }
    case Expr::Kind::Binary: {
      if (e.op == "&&") {
        if (!std::get<bool>(eval_expr(*e.lhs, env))) return false;
        return eval_expr(*e.rhs, env);
      }
      if (e.op == "||") {
        if (std::get<bool>(eval_expr(*e.lhs, env))) return true;
        return eval_expr(*e.rhs, env);
      }
      Value a = eval_expr(*e.lhs, env);
      Value b = eval_expr(*e.rhs, env);
      if (e.op == "==") return a == b;
      if (e.op == "!=") return !(a == b);
      long long x = std::get<long long>(a), y = std::get<long long>(b);
      if (e.op == "+") return x + y;
      if (e.op == "-") return x - y;
      if (e.op == "<") return x < y;
      if (e.op == "<=") return x <= y;
      if (e.op == ">") return x > y;
      return x >= y;  // ">="
    }
  }
  return false;
}

}  // namespace mvcheck
