#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mvcheck/dol.hpp"
#include "mvcheck/kernel.hpp"
#include "mvcheck/morphisms.hpp"

namespace mvcheck {

// A named theory participating in a network.
struct ResolvedNode {
  std::string name;
  Theory theory;
};

// A refinement link: every realization of the concrete theory must satisfy
// the abstract sentences. Both sides share one signature by construction.
struct ResolvedLink {
  std::string name;
  Theory abstractTheory;
  Theory concreteTheory;
  // Model names referenced on each side (for graph export).
  std::vector<std::string> abstractRefs, concreteRefs;
};

struct ResolvedNetwork {
  std::string name;
  bool expectConsistent = false;  // %consistent annotation on the network
  std::vector<ResolvedNode> nodes;
  std::vector<ResolvedLink> links;
};

// Where model files live. `overrides` (filename -> content) shadow the
// directory; handy for tests and in-memory corpora.
struct Library {
  std::string rootDir;
  std::map<std::string, std::string> overrides;
  DolFile dol;

  std::optional<std::string> read(const std::string& filename) const;
  bool exists(const std::string& filename) const;
};

// Everything a library resolves to, in declaration order.
struct ResolvedGraph {
  std::vector<std::pair<std::string, Theory>> models;  // resolution order
  std::vector<ResolvedLink> refinements;
  std::vector<ResolvedNetwork> networks;
  // Definitional dependencies (used model -> defined model).
  std::vector<std::pair<std::string, std::string>> deps;
};

// Resolves structuring expressions to theories. Named models are memoized;
// a bare NAME resolves to a declaration in the library file or to exactly
// one of NAME.cd / NAME.od / NAME.stm / NAME.sd / NAME.cmp on disk.
class Resolver {
 public:
  Resolver(const Library& lib, Diagnostics& diags,
           const MorphismRegistry& reg = MorphismRegistry::builtin());

  Theory model(const std::string& name);
  Theory eval(const ModelExpr& e);
  std::optional<ResolvedLink> refinement(const std::string& name);
  std::optional<ResolvedNetwork> network(const std::string& name);
  ResolvedGraph resolve_all();

 private:
  Theory load_file(const std::string& name, int line);
  Theory reveal(const Theory& base, const std::string& window, int line);
  Theory rename(
      const Theory& base,
      const std::vector<std::pair<std::string, std::string>>& renames,
      int line);

  const Library& lib_;
  Diagnostics& diags_;
  const MorphismRegistry& reg_;
  std::map<std::string, Theory> cache_;
  std::map<std::string, std::optional<ResolvedLink>> linkCache_;
  std::vector<std::string> order_;  // cache insertion order
  std::set<std::string> inProgress_;
};

// Deterministic GraphViz rendering: model nodes labelled name:institution,
// solid edges for definitional dependencies, diamonds and dashed edges for
// refinements, boxes and dotted edges for network membership.
std::string export_dot(const ResolvedGraph& g);

}  // namespace mvcheck
