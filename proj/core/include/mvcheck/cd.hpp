#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mvcheck/expr.hpp"

namespace mvcheck {

// Multiplicity bound; hi = kUnbounded encodes '*'.
struct Mult {
  long long lo = 0;
  long long hi = kUnbounded;
  static constexpr long long kUnbounded = -1;
  bool unbounded() const { return hi == kUnbounded; }
  std::string str() const;
  bool operator==(const Mult& o) const { return lo == o.lo && hi == o.hi; }
};

struct AttrDef {
  std::string name;
  Type type;
};

struct Param {
  std::string name;
  Type type;
};

struct ReceptionDef {
  std::string name;
  std::vector<Param> params;
};

struct ClassDef {
  std::string name;
  std::string parent;  // empty = no superclass
  std::vector<AttrDef> attrs;
  std::vector<ReceptionDef> receptions;
  int line = 0;
};

// assoc NAME : A [m] roleA -- roleB [m] B
// Each end names the class it touches; `role` is the name under which that
// end is navigated to from the other end.
struct AssocEnd {
  std::string cls;
  std::string role;
  Mult mult;
};

struct AssocDef {
  std::string name;
  AssocEnd a, b;
  int line = 0;
};

struct Invariant {
  std::string cls;
  ExprPtr expr;
  int line = 0;
};

// A class-diagram theory: classes with typed attributes and receptions,
// binary associations with multiplicities, and class invariants.
struct ClassModel {
  std::string name;
  std::vector<ClassDef> classes;
  std::vector<AssocDef> assocs;
  std::vector<Invariant> invariants;

  const ClassDef* find_class(const std::string& n) const;
  const AssocDef* find_assoc(const std::string& n) const;
  // Inherited members flattened; walks the `extends` chain.
  std::vector<AttrDef> all_attrs(const std::string& cls) const;
  std::vector<ReceptionDef> all_receptions(const std::string& cls) const;
  const ReceptionDef* find_reception(const std::string& cls,
                                     const std::string& msg) const;
  // True if `cls` equals or transitively extends `ancestor`.
  bool is_subclass_of(const std::string& cls, const std::string& ancestor) const;
  bool empty() const { return classes.empty() && assocs.empty(); }
};

ClassModel parse_cd(const std::string& text, Diagnostics& diags);

// Parses a type spelling: `Bool`, `Int lo..hi`, `Enum(a, b, ...)`.
std::optional<Type> parse_type(TokenCursor& cur);

// Well-formedness: unique names, acyclic single inheritance, known types in
// associations and invariants, invariant typability. Diagnostics carry the
// syntactic/structural tag.
bool wellformed_cd(const ClassModel& m, Diagnostics& diags);

// The sentences of a class-diagram theory: one invariant sentence per `inv`
// and one multiplicity sentence per association end.
struct MultSentence {
  std::string assoc;
  bool at_end_b = true;  // which end the bound is written at
  Mult mult;
};

struct CdSentence {
  enum class Kind { Invariant, Multiplicity } kind;
  Invariant inv;       // Kind::Invariant
  MultSentence mult;   // Kind::Multiplicity
  std::string str() const;
};

std::vector<CdSentence> cd_sentences(const ClassModel& m);

}  // namespace mvcheck
