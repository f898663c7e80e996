#pragma once

#include "mvcheck/stm.hpp"

namespace mvcheck {

struct PartDef {
  std::string name;
  std::string cls;
  std::string machine;  // state machine name; empty = passive part
  int line = 0;
};

// Bidirectional message channel between two parts. An empty message list
// carries every reception of the two end classes.
struct ConnectorDef {
  std::string a, b;
  std::vector<std::string> messages;
  int line = 0;
};

// Environment injection point: env may send the listed messages to the
// part. An empty list injects every reception of the part's class.
struct GateDef {
  std::string name;
  std::string part;
  std::vector<std::string> messages;
  int line = 0;
};

struct Component {
  std::string name;
  std::vector<PartDef> parts;
  std::vector<ConnectorDef> connectors;
  std::vector<GateDef> gates;
  // Set on components wrapped from a bare state machine: the environment
  // may inject any reception. Cleared as soon as explicit gates appear.
  bool implicitGates = false;
  int line = 0;
  bool empty() const { return name.empty(); }
  const PartDef* find_part(const std::string& n) const;
};

Component parse_cmp(const std::string& text, Diagnostics& diags);

// Well-formedness against the class diagram and the machines in scope.
// A component that declares no parts is treated as a fragment (its
// connectors and gates name parts supplied later by composition) and only
// local checks run.
void wellformed_cmp(const Component& c, const ClassModel& m,
                    const std::map<std::string, const StateMachine*>& machines,
                    Diagnostics& diags);

// Structure sentences: one per part, connector, and gate.
std::vector<std::string> cmp_sentences(const Component& c);

}  // namespace mvcheck
