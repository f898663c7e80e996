#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mvcheck/lexer.hpp"

namespace mvcheck {

// Attribute / parameter types of the data language.
struct BoolType {};
struct IntRange {
  long long lo = 0, hi = 0;
  bool operator==(const IntRange& o) const { return lo == o.lo && hi == o.hi; }
};
struct EnumType {
  std::vector<std::string> literals;
  bool operator==(const EnumType& o) const { return literals == o.literals; }
};
struct Type {
  std::variant<BoolType, IntRange, EnumType> v;
  bool is_bool() const { return std::holds_alternative<BoolType>(v); }
  bool is_int() const { return std::holds_alternative<IntRange>(v); }
  bool is_enum() const { return std::holds_alternative<EnumType>(v); }
  const IntRange& int_range() const { return std::get<IntRange>(v); }
  const EnumType& enum_type() const { return std::get<EnumType>(v); }
  bool operator==(const Type& o) const;
  std::string str() const;
};

// Runtime values. Enum values are carried as their literal name.
using Value = std::variant<bool, long long, std::string>;

std::string value_str(const Value& v);
bool value_in_type(const Value& v, const Type& t);
// All values of a (finite) type, in a stable order.
std::vector<Value> type_values(const Type& t);

// Boolean/arithmetic expressions over `self.attr`, parameters, and
// constants: comparisons, && || !, + -.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    BoolLit,   // value
    IntLit,    // value
    Name,      // text: parameter or enum literal (resolved by typing)
    SelfAttr,  // text: attribute name
    Unary,     // op: '!' or '-'
    Binary,    // op: one of == != < <= > >= && || + -
  };
  Kind kind;
  Value value;
  std::string text;
  std::string op;
  ExprPtr lhs, rhs;
  int line = 0, col = 0;

  std::string str() const;
};

ExprPtr parse_expr(TokenCursor& cur);

// Typing context: self-attributes and trigger parameters.
struct ExprContext {
  std::map<std::string, Type> attrs;   // attribute name -> type
  std::map<std::string, Type> params;  // parameter name -> type
};

// Returns the expression's type, or nullopt after reporting diagnostics.
// Bare names resolve to parameters first; otherwise, to an enum literal of
// some attribute/parameter enum type in scope.
std::optional<Type> typecheck_expr(const Expr& e, const ExprContext& ctx,
                                   Diagnostics& diags);

// Evaluation is total on well-typed input over total environments.
struct ExprEnv {
  const std::map<std::string, Value>* attrs = nullptr;   // self valuation
  const std::map<std::string, Value>* params = nullptr;  // trigger bindings
};

Value eval_expr(const Expr& e, const ExprEnv& env);

}  // namespace mvcheck
