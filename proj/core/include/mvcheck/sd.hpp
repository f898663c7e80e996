#pragma once

#include <memory>
#include <set>

#include "mvcheck/cd.hpp"

namespace mvcheck {

// Argument pattern of a message occurrence: a literal value, a wildcard, or
// a variable. A variable may carry a type annotation at its first occurrence
// (`p: Int 0..2`); later occurrences of the same variable constrain equality
// within one matching run.
struct ArgPattern {
  enum class Kind { Literal, Wildcard, Variable };
  Kind kind = Kind::Wildcard;
  Value literal;
  std::string var;
  std::optional<Type> declaredType;
  std::string str() const;
};

struct SdMessage {
  std::string from, to;  // lifeline names or "env"
  std::string message;
  std::vector<ArgPattern> args;
  int line = 0;
  std::string str() const;
};

struct InteractionTerm;
using TermPtr = std::shared_ptr<const InteractionTerm>;

struct InteractionTerm {
  enum class Kind { Msg, Seq, Alt, Opt, Loop };
  Kind kind = Kind::Seq;
  SdMessage msg;                  // Msg
  std::vector<TermPtr> children;  // Seq/Alt branches, Opt/Loop body in [0]
  long long lo = 0, hi = 0;       // Loop bounds, hi finite
  int line = 0;
  std::string str() const;
};

struct Lifeline {
  std::string name;
  std::string cls;
  int line = 0;
};

struct InteractionModel {
  std::string name;
  std::vector<Lifeline> lifelines;
  TermPtr root;
  int line = 0;
  bool empty() const { return name.empty(); }
  const Lifeline* find_lifeline(const std::string& n) const;
};

InteractionModel parse_sd(const std::string& text, Diagnostics& diags);

// Standalone checks: unique lifelines, known endpoints, loop bounds in
// order, consistent variable typing (one declaration per variable).
void wellformed_sd(const InteractionModel& sd, Diagnostics& diags);

// Message names used anywhere in the term (the diagram's alphabet).
std::set<std::string> sd_messages(const InteractionModel& sd);

// Variable name -> declared type, from `v: T` annotations. Diagnoses
// conflicting re-declarations when diags is given.
std::map<std::string, Type> sd_var_types(const InteractionModel& sd,
                                         Diagnostics* diags);

// Message name -> positional parameter types as far as the patterns reveal
// them (declared variable types, boolean literals); open positions stay
// nullopt.
std::map<std::string, std::vector<std::optional<Type>>> sd_message_sig(
    const InteractionModel& sd);

std::string sd_text(const InteractionModel& sd);

}  // namespace mvcheck
