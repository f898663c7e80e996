#pragma once

#include <map>
#include <optional>
#include <string>

#include "mvcheck/enumerate.hpp"
#include "mvcheck/ts.hpp"

namespace mvcheck {

// A self-contained consistency witness for one network: the system
// transition system over the witnessing initial snapshot, an interaction
// witness trace (possibly empty), and per-node digests of the reduct
// realizations. Another process can replay the system from the bundle alone
// and cross-check every digest.
struct WitnessBundle {
  std::string network;
  Bounds bounds;
  Trace trace;
  std::map<std::string, std::string> digests;  // node name -> hex digest
  TransitionSystem systemTs;

  const Snapshot& init() const {
    return systemTs.states.at(systemTs.initial.at(0)).snapshot;
  }
};

// Writes manifest.json, system_ts.txt and a human-readable trace.txt
// filmstrip into `dir` (created if missing).
bool write_witness(const WitnessBundle& b, const std::string& dir,
                   Diagnostics& diags);

std::optional<WitnessBundle> read_witness(const std::string& dir,
                                          Diagnostics& diags);

std::string hex_digest(std::uint64_t d);

}  // namespace mvcheck
