#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mvcheck/cmp.hpp"
#include "mvcheck/enumerate.hpp"
#include "mvcheck/stm.hpp"
#include "mvcheck/ts.hpp"

namespace mvcheck {

// A closed execution model: which object runs which machine, which messages
// the environment may inject per object, and which object pairs may exchange
// which messages (connector discipline; carryAll lifts the restriction).
struct ExecModel {
  const ClassModel* cd = nullptr;
  std::map<std::string, const StateMachine*> machines;  // object -> machine
  std::map<std::string, std::set<std::string>> gates;   // object -> injectable
  bool carryAll = true;
  // (sender object, receiver object) -> allowed messages; empty set = all
  std::map<std::pair<std::string, std::string>, std::set<std::string>> carries;
};

struct GenStats {
  long long statesExplored = 0;
  long long transitionsAdded = 0;
  long long overflowPruned = 0;  // moves dropped for queue/inbox capacity
  long long discards = 0;        // dispatched events no transition accepted
  std::string str() const;
};

// One successor: the event that happened, whether it is observable (fired
// dispatches and env-consumptions are; injections and discards are not), and
// the state reached.
struct StepMove {
  EventLabel label;
  bool observable = false;
  TsState next;
};

// Assigns to every object the machine of its class (or closest declared
// ancestor); every reception of the object's class is injectable. Fails when
// two machines claim one object.
std::optional<ExecModel> exec_for_machines(
    const ClassModel& cd, const std::vector<StateMachine>& machines,
    const Snapshot& init, std::string* whyNot = nullptr);

// Binds each part, in declaration order, to the first unused object of its
// class; applies gate/connector discipline. Unbindable parts make the
// snapshot non-conformant to the component (nullopt).
std::optional<ExecModel> exec_for_component(
    const ClassModel& cd, const Component& cmp,
    const std::vector<StateMachine>& machines, const Snapshot& init,
    std::string* whyNot = nullptr,
    std::map<std::string, std::string>* binding = nullptr);

TsState initial_state(const ExecModel& m, const Snapshot& init);

// All moves from `s`, deterministically ordered: injections (by object, then
// message, then argument order), env consumption, then dispatches (by
// object). A dispatch pops the head event and fires the first transition, in
// declaration order, whose trigger/guard match and whose effects neither
// leave a range nor break an invariant; capacity overflow prunes the move;
// no firing candidate means the event is discarded silently.
std::vector<StepMove> step(const ExecModel& m, const TsState& s,
                           const Bounds& b, GenStats* stats = nullptr);

// Breadth-first closure of `step` from the initial state under the bounds;
// sets exploredCompletely=false (with a boundNote) when a cap was hit.
TransitionSystem generate_ts(const ExecModel& m, const Snapshot& init,
                             const Bounds& b, GenStats* stats = nullptr);

}  // namespace mvcheck
