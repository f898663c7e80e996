#include "mvcheck/report.hpp"

#include <sstream>

#include <json.hpp>

namespace mvcheck {

using ordered_json = nlohmann::ordered_json;

std::string verdict_name(VerdictKind v) {
  switch (v) {
    case VerdictKind::Consistent: return "CONSISTENT";
    case VerdictKind::Inconsistent: return "INCONSISTENT";
    case VerdictKind::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

int verdict_exit_code(VerdictKind v) {
  switch (v) {
    case VerdictKind::Consistent: return 0;
    case VerdictKind::Inconsistent: return 1;
    case VerdictKind::Unknown: return 2;
  }
  return 2;
}

std::string to_text(const ConsistencyReport& r) {
  std::ostringstream os;
  os << "network " << r.network << ": " << verdict_name(r.verdict) << "\n";
  if (!r.detail.empty()) os << "  " << r.detail << "\n";
  os << "  strategy: " << r.strategy << "\n";
  os << "  bounds: " << r.bounds.str() << "\n";
  if (!r.models.empty()) {
    os << "  views:\n";
    for (const auto& m : r.models) {
      os << "    " << m.name << " (" << m.institution << ", " << m.scope
         << "): " << m.status;
      if (!m.detail.empty()) os << " -- " << m.detail;
      os << "\n";
    }
  }
  if (!r.links.empty()) {
    os << "  refinements:\n";
    for (const auto& l : r.links) {
      os << "    " << l.name << ": " << l.status;
      if (!l.detail.empty()) os << " -- " << l.detail;
      os << "\n";
    }
  }
  os << "  explored: " << r.stats.snapshotsTried << " snapshots, "
     << r.stats.snapshotsAnchored << " anchored, " << r.stats.statesExplored
     << " states, " << r.stats.transitionsAdded << " transitions\n";
  if (r.stats.overflowPruned || r.stats.discards)
    os << "  pruned: " << r.stats.overflowPruned << " overflowing moves, "
       << r.stats.discards << " discards\n";
  if (r.stats.productStates)
    os << "  interaction product: " << r.stats.productStates << " states\n";
  if (!r.witnessInit.empty()) {
    os << "  witness initial state:\n";
    for (const auto& l : r.witnessInit) os << "    " << l << "\n";
  }
  if (!r.witnessTrace.empty()) {
    os << "  witness trace:\n";
    for (const auto& l : r.witnessTrace) os << "    " << l << "\n";
  }
  if (r.wallSeconds >= 0) os << "  wall: " << r.wallSeconds << "s\n";
  return os.str();
}

std::string to_json(const ConsistencyReport& r) {
  ordered_json j;
  j["network"] = r.network;
  j["verdict"] = verdict_name(r.verdict);
  j["strategy"] = r.strategy;
  j["detail"] = r.detail;
  j["bounds"] = {{"maxObjectsPerClass", r.bounds.maxObjectsPerClass},
                 {"depth", r.bounds.depth},
                 {"queueDepth", r.bounds.queueDepth},
                 {"maxStates", r.bounds.maxStates}};
  ordered_json models = ordered_json::array();
  for (const auto& m : r.models) {
    models.push_back({{"name", m.name},
                      {"institution", m.institution},
                      {"scope", m.scope},
                      {"sentences", m.sentences},
                      {"status", m.status},
                      {"detail", m.detail}});
  }
  j["models"] = models;
  ordered_json links = ordered_json::array();
  for (const auto& l : r.links) {
    links.push_back({{"name", l.name},
                     {"direction", "vertical"},
                     {"status", l.status},
                     {"detail", l.detail}});
  }
  j["links"] = links;
  j["stats"] = {{"snapshotsTried", r.stats.snapshotsTried},
                {"snapshotsAnchored", r.stats.snapshotsAnchored},
                {"statesExplored", r.stats.statesExplored},
                {"transitionsAdded", r.stats.transitionsAdded},
                {"overflowPruned", r.stats.overflowPruned},
                {"discards", r.stats.discards},
                {"productStates", r.stats.productStates}};
  j["taxonomy"] = {{"nature", "semantic"},
                   {"scope", "structural+behavioural"},
                   {"direction", r.links.empty() ? "horizontal"
                                                 : "horizontal+vertical"}};
  j["witness"] = {{"init", r.witnessInit}, {"trace", r.witnessTrace}};
  if (r.wallSeconds >= 0) j["wallSeconds"] = r.wallSeconds;
  return j.dump(2) + "\n";
}

}  // namespace mvcheck
