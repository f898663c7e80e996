#pragma once

#include <string>
#include <vector>

#include "mvcheck/enumerate.hpp"

namespace mvcheck {

// CONSISTENT: a realization satisfying every view was found within bounds.
// INCONSISTENT: an exact argument rules every realization out.
// UNKNOWN: the bounded search neither found a realization nor an exact
// refutation (a cap was hit along the way).
enum class VerdictKind { Consistent, Inconsistent, Unknown };

std::string verdict_name(VerdictKind v);
int verdict_exit_code(VerdictKind v);  // 0 / 1 / 2

struct ModelReport {
  std::string name;
  std::string institution;  // CD / STM / CMP / SD
  std::string scope;        // structural / behavioural
  int sentences = 0;
  std::string status;  // satisfied / violated / unknown / skipped
  std::string detail;
};

struct LinkReportRow {
  std::string name;
  std::string status;
  std::string detail;
};

struct ReportStats {
  long long snapshotsTried = 0;
  long long snapshotsAnchored = 0;
  long long statesExplored = 0;
  long long transitionsAdded = 0;
  long long overflowPruned = 0;
  long long discards = 0;
  long long productStates = 0;
};

struct ConsistencyReport {
  std::string network;
  std::string strategy;
  VerdictKind verdict = VerdictKind::Unknown;
  std::string detail;  // one-line reason
  Bounds bounds;
  std::vector<ModelReport> models;
  std::vector<LinkReportRow> links;
  ReportStats stats;
  std::vector<std::string> witnessInit;   // snapshot lines, when consistent
  std::vector<std::string> witnessTrace;  // event lines, when one exists
  double wallSeconds = -1;                // < 0: omit (determinism)
};

std::string to_text(const ConsistencyReport& r);
// Stable key order; suitable for byte-wise comparison across runs.
std::string to_json(const ConsistencyReport& r);

}  // namespace mvcheck
