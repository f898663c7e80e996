#pragma once

#include <optional>
#include <string>

#include "mvcheck/diagnostics.hpp"
#include "mvcheck/enumerate.hpp"
#include "mvcheck/kernel.hpp"
#include "mvcheck/report.hpp"
#include "mvcheck/resolver.hpp"
#include "mvcheck/witness.hpp"

namespace mvcheck {

// How a network is checked. All three strategies decide the same question --
// does some bounded realization satisfy every view and every refinement --
// and must agree on the verdict.
//
//  - Incremental: stage data sentences on the reduced snapshot first, then
//    build the joint behaviour, then check each view on its own reduct.
//  - Monolithic: build the joint behaviour once and check every sentence of
//    the union theory directly on it (no per-view reducts).
//  - Decentralized: run the incremental strategy, then re-verify a found
//    witness from scratch, cross-checking the digests of all reducts.
enum class Strategy { Incremental, Monolithic, Decentralized };

const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from(const std::string& name);

struct CheckOptions {
  Bounds bounds;
  Strategy strategy = Strategy::Incremental;
  bool wantWitness = false;  // assemble a re-checkable witness bundle
};

struct CheckResult {
  ConsistencyReport report;
  std::optional<WitnessBundle> witness;  // filled for CONSISTENT + wantWitness
};

// Checks one resolved network. Resolution/merge errors are reported through
// `diags`; the verdict is then UNKNOWN with an explanatory detail.
CheckResult check_network(const ResolvedNetwork& n, const CheckOptions& o,
                          Diagnostics& diags);

// Checks a single theory as a one-node network (used for `check <model>`).
CheckResult check_theory(const std::string& name, const Theory& t,
                         const CheckOptions& o, Diagnostics& diags);

// Independently re-establishes a witness bundle against a network: rebuilds
// the joint behaviour from the recorded initial snapshot, compares digests,
// re-derives every reduct and re-checks every sentence. Returns false (with
// `why`) on the first discrepancy.
bool verify_witness(const ResolvedNetwork& n, const WitnessBundle& b,
                    Diagnostics& diags, std::string* why = nullptr);

}  // namespace mvcheck
