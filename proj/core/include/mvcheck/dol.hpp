#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mvcheck/diagnostics.hpp"

namespace mvcheck {

// Structuring-language expression over models: references, grouping, union
// (`and`), extension (`then`), comorphism application (`with translation`),
// symbol renaming (`with a |-> b`), projection (`hide along`), and signature
// restriction (`reveal`). `then` binds loosest, `and` next, suffixes bind
// tightest.
struct ModelExpr;
using ModelExprPtr = std::shared_ptr<const ModelExpr>;

struct ModelExpr {
  enum class Kind {
    Ref,
    Braced,
    And,
    Then,
    WithTranslation,
    WithRename,
    HideAlong,
    Reveal,
  };
  Kind kind = Kind::Ref;
  std::string name;  // Ref target / morphism name / reveal window
  std::vector<std::pair<std::string, std::string>> renames;
  ModelExprPtr lhs, rhs;  // And/Then both; Braced and suffix kinds use lhs
  int line = 0;
  std::string str() const;
};

struct DolDecl {
  enum class Kind { Model, Refinement, Network };
  Kind kind = Kind::Model;
  std::string name;
  ModelExprPtr expr;                       // Model
  ModelExprPtr abstractSide;               // Refinement: lhs of `refined to`
  ModelExprPtr concreteSide;               // Refinement: rhs
  std::vector<std::string> elements;       // Network members, declared order
  std::vector<std::string> annotations;    // %word annotations
  int line = 0;
};

struct DolFile {
  std::string library;  // optional `library NAME` header
  std::vector<DolDecl> decls;
  const DolDecl* find(const std::string& name) const;
};

DolFile parse_dol(const std::string& text, Diagnostics& diags);

// Canonical printing; parse(print(parse(x))) is structurally parse(x).
std::string print_dol(const DolFile& f);

}  // namespace mvcheck
