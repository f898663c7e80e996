#pragma once

#include "mvcheck/snapshot.hpp"

namespace mvcheck {

// Search bounds for bounded realization finding. INCONSISTENT verdicts are
// always relative to these bounds.
struct Bounds {
  int maxObjectsPerClass = 2;
  int depth = 60;        // max observable trace length / BFS layer cap
  int queueDepth = 2;    // per-object event queue capacity
  int maxStates = 100000;

  std::string str() const;
};

// All snapshots over `m` with at most maxObjectsPerClass objects per class,
// one representative per isomorphism class, ordered by (object count,
// canonical encoding). Only conformant snapshots are produced.
//
// `anchor` objects and links are rigid: every produced snapshot embeds the
// anchor under identical identities; isomorphism only quotients the free
// extension objects. Extension objects are named <class>_<i>.
std::vector<Snapshot> enumerate_snapshots(const ClassModel& m, const Bounds& b,
                                          const Snapshot& anchor = {});

// Canonical key that keeps `fixed` identities rigid and minimizes over
// renamings of the remaining objects only.
std::string canonical_key_fixed(const Snapshot& s,
                                const std::set<std::string>& fixed);

}  // namespace mvcheck
