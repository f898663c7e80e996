#pragma once

#include "mvcheck/sd.hpp"
#include "mvcheck/ts.hpp"

namespace mvcheck {

// One matching run's bindings: lifeline names map to object ids (as string
// values), data variables to their values. Bindings are global to a run.
using BindEnv = std::map<std::string, Value>;

struct EventPattern {
  std::string from, to;  // lifeline names or "env"
  std::string message;
  std::vector<ArgPattern> args;
  // Matches e under env, extending env with new bindings on success.
  // Lifeline endpoints bind injectively (two lifelines never share an
  // object); variables bind on first occurrence and compare afterwards.
  bool matches(const EventLabel& e, BindEnv& env,
               const std::set<std::string>& lifelines) const;
};

struct NfaEdge {
  int from = 0;
  int to = 0;
  bool eps = true;
  EventPattern pat;  // valid when !eps
};

// Nondeterministic recognizer for the positive traces of an interaction.
struct TraceAutomaton {
  int stateCount = 0;
  int initial = 0;
  int accepting = 0;
  std::vector<NfaEdge> edges;
  std::set<std::string> alphabet;   // message names of the diagram
  std::set<std::string> lifelines;  // endpoint names (without env)
  std::vector<std::vector<int>> out;  // state -> outgoing edge indices
};

TraceAutomaton sd_to_nfa(const InteractionModel& sd);

struct NfaConfig {
  int state = 0;
  BindEnv env;
  bool operator<(const NfaConfig& o) const {
    return state != o.state ? state < o.state : env < o.env;
  }
};

using ConfigSet = std::set<NfaConfig>;

ConfigSet nfa_closure(const TraceAutomaton& a, ConfigSet cs);
// Advances every config on an in-alphabet event; result is closed.
ConfigSet nfa_advance(const TraceAutomaton& a, const ConfigSet& cs,
                      const EventLabel& e);
bool nfa_accepting(const TraceAutomaton& a, const ConfigSet& cs);

// Acceptance of a single trace. Events whose message is outside the
// diagram's alphabet are projected away. Lifelines bind lazily from the
// trace unless pre-bound in `seed`.
bool matches(const Trace& t, const TraceAutomaton& a, const BindEnv& seed = {});

// Every injective assignment of lifelines to class-compatible objects of
// the snapshot, in a stable order. Without a class model, classes compare
// by name equality.
std::vector<BindEnv> lifeline_seeds(const InteractionModel& sd,
                                    const Snapshot& s, const ClassModel* cd);

// Exists-mode satisfaction of an interaction over a transition system:
// reachability of an accepting configuration in the (state × config-set)
// product. complete reports whether the verdict exhausted the product
// (including that the TS itself was fully explored). On success, witnessRaw
// receives the observable event sequence of the accepting path.
bool ts_satisfies_sd(const TransitionSystem& ts, const InteractionModel& sd,
                     const ClassModel* cd, long long maxProductStates,
                     bool* complete, Trace* witnessRaw,
                     long long* productStates);

// Trace-set satisfaction. existsMode: some trace accepted; otherwise every
// maximal trace must be accepted. Symbolic trace sets in exists mode run
// the product; in all mode they are materialized first (bounded by
// maxProductStates, which makes the verdict inexact when it bites).
bool sd_satisfies(const TraceSet& T, const InteractionModel& sd,
                  const ClassModel* cd, bool existsMode,
                  long long maxProductStates, bool* complete, Trace* witness,
                  long long* productStates = nullptr);

}  // namespace mvcheck
