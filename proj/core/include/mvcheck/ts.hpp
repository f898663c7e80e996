#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mvcheck/snapshot.hpp"

namespace mvcheck {

// An event: a message with argument values on its way from sender to
// receiver. "env" is the reserved identity of the environment.
struct EventLabel {
  std::string sender;
  std::string receiver;
  std::string message;
  std::vector<Value> args;

  bool operator==(const EventLabel& o) const {
    return sender == o.sender && receiver == o.receiver &&
           message == o.message && args == o.args;
  }
  bool operator<(const EventLabel& o) const;
  std::string str() const;  // sender -> receiver : msg(v,...)
};

using Trace = std::vector<EventLabel>;

std::string trace_str(const Trace& t);

// Per-object machine-level state: current control state plus the FIFO of
// pending events. Empty control means the object runs no machine.
struct ObjectRuntime {
  std::string control;
  std::vector<EventLabel> queue;
  bool operator==(const ObjectRuntime& o) const {
    return control == o.control && queue == o.queue;
  }
};

struct TsState {
  Snapshot snapshot;
  std::map<std::string, ObjectRuntime> runtime;  // machine level only
  std::vector<EventLabel> envInbox;              // events addressed to env
  std::string encode() const;
  bool operator==(const TsState& o) const { return encode() == o.encode(); }
};

struct TsTransition {
  int from = 0;
  EventLabel label;
  bool observable = true;  // discards and injections are hidden
  int to = 0;
};

// Snapshot transition system. States carry snapshots (and, at machine
// level, control extensions); transition labels are events.
struct TransitionSystem {
  std::vector<TsState> states;
  std::vector<int> initial;
  std::vector<TsTransition> transitions;
  bool exploredCompletely = true;
  std::string boundNote;  // which cap stopped exploration, if any

  // state -> outgoing transition indices, in insertion order
  std::vector<std::vector<int>> out_edges() const;
  // Canonical text form: state contents and edges independent of state
  // numbering. Used for equality up to renaming and for digests.
  std::string canonical_text() const;
  std::uint64_t digest() const;
};

// A set of finite traces. Either explicit, or backed by a transition system
// whose observable language up to `depth` it denotes (kept symbolic so the
// checker can avoid materializing exponentially many traces).
struct TraceSet {
  std::vector<Trace> traces;
  int depth = 0;  // provenance: cut depth (0 = not depth-cut)
  std::shared_ptr<const TransitionSystem> source;

  bool symbolic() const { return source != nullptr; }
};

// Observable-label sequences of length <= depth along paths from the
// initial states; prefix-closed, deduplicated, sorted.
// Observable traces of length <= depth, at most maxTraces of them (-1: no
// limit). `cut` reports whether either limit truncated the set; a cut set
// cannot support exact all-mode verdicts.
TraceSet ts_traces(const TransitionSystem& ts, int depth,
                   long long maxTraces = -1, bool* cut = nullptr);

// What a reduct keeps. Classes not listed lose their objects; attributes
// and messages not listed disappear; events over dropped messages or
// dropped endpoints become hidden; control/queues survive only for classes
// in keepRuntime. States that become equal are merged.
struct SignatureFilter {
  std::set<std::string> classes;
  std::set<std::pair<std::string, std::string>> attrs;  // (class, attr)
  std::set<std::string> assocs;
  std::set<std::string> messages;
  std::set<std::string> keepRuntime;  // classes keeping machine state
};

Snapshot snapshot_reduct(const Snapshot& s, const SignatureFilter& f);
TransitionSystem ts_reduct(const TransitionSystem& ts, const SignatureFilter& f);
TraceSet traceset_reduct(const TraceSet& t, const SignatureFilter& f);

// Plain-text serialization of a transition system (states with snapshots,
// initial states, labeled transitions) and its inverse.
std::string ts_text(const TransitionSystem& ts);
TransitionSystem parse_ts_text(const std::string& text, Diagnostics& diags);

// Event line parser for trace/filmstrip files: sender -> receiver : msg(v,...)
bool parse_event_line(const std::string& line, EventLabel& out,
                      std::string& err);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace mvcheck
