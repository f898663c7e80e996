#include <set>
#include <sstream>

#include "mvcheck/resolver.hpp"

namespace mvcheck {

// Output is deterministic: nodes in resolution order, edges in declaration
// order, duplicates dropped on first sight.
std::string export_dot(const ResolvedGraph& g) {
  std::ostringstream os;
  os << "digraph models {\n";
  os << "  rankdir=LR;\n";
  for (const auto& [name, t] : g.models)
    os << "  \"" << name << "\" [label=\"" << name << ":"
       << institution_name(t.institution) << "\"];\n";
  for (const auto& r : g.refinements)
    os << "  \"" << r.name << "\" [label=\"" << r.name
       << "\", shape=diamond];\n";
  for (const auto& n : g.networks)
    os << "  \"" << n.name << "\" [label=\"" << n.name << "\", shape=box];\n";

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& [from, to] : g.deps)
    if (seen.insert({from, to}).second)
      os << "  \"" << from << "\" -> \"" << to << "\";\n";
  for (const auto& r : g.refinements) {
    for (const auto& a : r.abstractRefs)
      if (seen.insert({a, r.name}).second)
        os << "  \"" << a << "\" -> \"" << r.name << "\" [style=dashed];\n";
    for (const auto& c : r.concreteRefs)
      if (seen.insert({r.name, c}).second)
        os << "  \"" << r.name << "\" -> \"" << c << "\" [style=dashed];\n";
  }
  for (const auto& n : g.networks) {
    for (const auto& nd : n.nodes)
      if (seen.insert({n.name, nd.name}).second)
        os << "  \"" << n.name << "\" -> \"" << nd.name
           << "\" [style=dotted];\n";
    for (const auto& l : n.links)
      if (seen.insert({n.name, l.name}).second)
        os << "  \"" << n.name << "\" -> \"" << l.name
           << "\" [style=dotted];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace mvcheck
