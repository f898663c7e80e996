#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mvcheck/cd.hpp"

namespace mvcheck {

// A system state at the data level: typed objects with total attribute
// valuations plus links per association. Object identities are the map keys.
struct ObjectState {
  std::string cls;
  std::map<std::string, Value> attrs;
  bool operator==(const ObjectState& o) const {
    return cls == o.cls && attrs == o.attrs;
  }
};

struct Snapshot {
  std::map<std::string, ObjectState> objects;  // id -> state
  // assoc name -> set of (idA, idB), A/B in declaration order of the ends
  std::map<std::string, std::set<std::pair<std::string, std::string>>> links;

  bool operator==(const Snapshot& o) const {
    return objects == o.objects && links == o.links;
  }
  std::vector<std::string> objects_of_class(const ClassModel& m,
                                            const std::string& cls) const;
  // Stable text encoding; equal snapshots encode equally.
  std::string encode() const;
  // Least encoding over all object-identity renamings (isomorphism class
  // representative). Practical for the small object counts bounded search
  // uses; cost grows with per-class factorials.
  std::string canonical_key() const;
};

// Does the snapshot satisfy the theory? Checks typing (known classes, total
// in-range valuations, well-typed links) and the theory's sentences
// (invariants, multiplicities). A multiplicity with lower bound >= 1 also
// requires at least one object at the end it is written at: a mandatory end
// asserts its type is inhabited.
bool conforms(const Snapshot& s, const ClassModel& m, Diagnostics& diags);
bool conforms(const Snapshot& s, const ClassModel& m);  // quiet variant

// Evaluate one sentence on a snapshot (typing assumed).
bool holds_sentence(const Snapshot& s, const ClassModel& m, const CdSentence& st);

// An object diagram denotes the requirement that its objects (by their
// literal, rigid identities), attribute values, and links are present in a
// snapshot. Valuations must be total.
struct ObjectDiagram {
  std::string name;
  std::string context;  // name of the governing class diagram
  Snapshot snapshot;
};

ObjectDiagram parse_od(const std::string& text, Diagnostics& diags);

// Typing of an OD against its context model (unknown class/attribute,
// missing or out-of-range value, ill-typed link).
bool wellformed_od(const ObjectDiagram& od, const ClassModel& m,
                   Diagnostics& diags);

// Does `s` embed `part`? All of part's objects must occur in `s` under the
// same identity with equal class and attribute values, and all links must
// be present.
bool embeds(const Snapshot& s, const Snapshot& part);

// Plain-text snapshot rendering used by object diagrams and filmstrips.
std::string snapshot_text(const Snapshot& s, const std::string& indent = "");
std::string od_text(const ObjectDiagram& od);

}  // namespace mvcheck
