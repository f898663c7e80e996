#include "mvcheck/exec.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace mvcheck {

std::string GenStats::str() const {
  std::ostringstream os;
  os << "states=" << statesExplored << " transitions=" << transitionsAdded
     << " overflowPruned=" << overflowPruned << " discards=" << discards;
  return os.str();
}

namespace {

const StateMachine* find_machine(const std::vector<StateMachine>& ms,
                                 const std::string& name) {
  for (const auto& m : ms)
    if (m.name == name) return &m;
  return nullptr;
}

std::set<std::string> reception_names(const ClassModel& cd,
                                      const std::string& cls) {
  std::set<std::string> out;
  for (const auto& r : cd.all_receptions(cls)) out.insert(r.name);
  return out;
}

// All argument tuples of a reception, last parameter varying fastest.
std::vector<std::vector<Value>> arg_tuples(const ReceptionDef& r) {
  std::vector<std::vector<Value>> tuples{{}};
  for (const auto& p : r.params) {
    std::vector<std::vector<Value>> next;
    for (const auto& t : tuples)
      for (const auto& v : type_values(p.type)) {
        auto t2 = t;
        t2.push_back(v);
        next.push_back(std::move(t2));
      }
    tuples = std::move(next);
  }
  return tuples;
}

}  // namespace

std::optional<ExecModel> exec_for_machines(
    const ClassModel& cd, const std::vector<StateMachine>& machines,
    const Snapshot& init, std::string* whyNot) {
  ExecModel m;
  m.cd = &cd;
  for (const auto& [id, st] : init.objects) {
    const StateMachine* exact = nullptr;
    std::vector<const StateMachine*> inherited;
    for (const auto& sm : machines) {
      if (sm.contextClass == st.cls) {
        if (exact) {
          if (whyNot)
            *whyNot = "object '" + id + "': machines '" + exact->name +
                      "' and '" + sm.name + "' both claim class " + st.cls;
          return std::nullopt;
        }
        exact = &sm;
      } else if (cd.is_subclass_of(st.cls, sm.contextClass)) {
        inherited.push_back(&sm);
      }
    }
    const StateMachine* chosen = exact;
    if (!chosen) {
      if (inherited.size() > 1) {
        if (whyNot)
          *whyNot = "object '" + id + "': machines '" + inherited[0]->name +
                    "' and '" + inherited[1]->name +
                    "' both claim an ancestor of " + st.cls;
        return std::nullopt;
      }
      if (inherited.size() == 1) chosen = inherited[0];
    }
    if (chosen) {
      m.machines[id] = chosen;
      m.gates[id] = reception_names(cd, st.cls);
    }
  }
  return m;
}

std::optional<ExecModel> exec_for_component(
    const ClassModel& cd, const Component& cmp,
    const std::vector<StateMachine>& machines, const Snapshot& init,
    std::string* whyNot, std::map<std::string, std::string>* binding) {
  ExecModel m;
  m.cd = &cd;
  m.carryAll = false;
  std::map<std::string, std::string> bound;  // part -> object
  std::set<std::string> used;
  for (const auto& p : cmp.parts) {
    std::string picked;
    for (const auto& id : init.objects_of_class(cd, p.cls)) {
      if (!used.count(id)) {
        picked = id;
        break;
      }
    }
    if (picked.empty()) {
      if (whyNot)
        *whyNot = "part '" + p.name + "': no unbound object of class " + p.cls;
      return std::nullopt;
    }
    used.insert(picked);
    bound[p.name] = picked;
    if (!p.machine.empty()) {
      const StateMachine* sm = find_machine(machines, p.machine);
      if (!sm) {
        if (whyNot) *whyNot = "part '" + p.name + "': unknown machine " + p.machine;
        return std::nullopt;
      }
      m.machines[picked] = sm;
      if (cmp.implicitGates) m.gates[picked] = reception_names(cd, p.cls);
    }
  }
  if (!cmp.implicitGates) {
    for (const auto& g : cmp.gates) {
      auto it = bound.find(g.part);
      if (it == bound.end()) continue;  // fragment leftovers are inert
      const PartDef* p = cmp.find_part(g.part);
      std::set<std::string> msgs =
          g.messages.empty() ? reception_names(cd, p->cls)
                             : std::set<std::string>(g.messages.begin(),
                                                     g.messages.end());
      auto& slot = m.gates[it->second];
      slot.insert(msgs.begin(), msgs.end());
    }
  }
  for (const auto& c : cmp.connectors) {
    auto ia = bound.find(c.a), ib = bound.find(c.b);
    if (ia == bound.end() || ib == bound.end()) continue;
    std::set<std::string> msgs(c.messages.begin(), c.messages.end());
    for (auto key : {std::make_pair(ia->second, ib->second),
                     std::make_pair(ib->second, ia->second)}) {
      auto it = m.carries.find(key);
      if (it == m.carries.end()) {
        m.carries[key] = msgs;
      } else if (it->second.empty() || msgs.empty()) {
        it->second.clear();  // empty set means: every message
      } else {
        it->second.insert(msgs.begin(), msgs.end());
      }
    }
  }
  if (binding) *binding = bound;
  return m;
}

TsState initial_state(const ExecModel& m, const Snapshot& init) {
  TsState s;
  s.snapshot = init;
  for (const auto& [id, sm] : m.machines) {
    ObjectRuntime rt;
    rt.control = sm->initial;
    s.runtime[id] = rt;
  }
  return s;
}

namespace {

bool invariants_hold(const ClassModel& cd, const Snapshot& s) {
  for (const auto& inv : cd.invariants) {
    CdSentence st;
    st.kind = CdSentence::Kind::Invariant;
    st.inv = inv;
    if (!holds_sentence(s, cd, st)) return false;
  }
  return true;
}

// Linked partners of `obj` reachable under role `role`, sorted.
std::set<std::string> partners_of(const ClassModel& cd, const Snapshot& s,
                                  const std::string& obj,
                                  const std::string& cls,
                                  const std::string& role) {
  std::set<std::string> out;
  for (const auto& [assoc, atA] : roles_from(cd, cls, role)) {
    auto it = s.links.find(assoc->name);
    if (it == s.links.end()) continue;
    for (const auto& [x, y] : it->second) {
      if (atA && x == obj) out.insert(y);
      if (!atA && y == obj) out.insert(x);
    }
  }
  return out;
}

bool carry_allows(const ExecModel& m, const std::string& from,
                  const std::string& to, const std::string& msg) {
  if (m.carryAll) return true;
  auto it = m.carries.find({from, to});
  if (it == m.carries.end()) return false;
  return it->second.empty() || it->second.count(msg) > 0;
}

// Applies a transition's effects to `n`. Returns false when an assignment
// leaves its attribute's range or an invariant breaks (the candidate is then
// disabled); sets `overflow` when a send exceeds a queue/inbox capacity
// (the whole dispatch move is then pruned).
bool apply_effects(const ExecModel& m, const MachineTransition& t,
                   const std::string& obj,
                   const std::map<std::string, Value>& params, const Bounds& b,
                   TsState& n, bool& overflow) {
  const std::string cls = n.snapshot.objects.at(obj).cls;
  for (const auto& eff : t.effects) {
    auto& attrs = n.snapshot.objects.at(obj).attrs;
    ExprEnv env{&attrs, &params};
    if (eff.kind == Effect::Kind::Assign) {
      Value v = eval_expr(*eff.value, env);
      const Type* ty = nullptr;
      for (const auto& a : m.cd->all_attrs(cls))
        if (a.name == eff.attr) ty = &a.type;
      if (!ty || !value_in_type(v, *ty)) return false;
      attrs[eff.attr] = v;
    } else {
      std::vector<Value> args;
      for (const auto& a : eff.args) args.push_back(eval_expr(*a, env));
      if (eff.target == "env") {
        if (static_cast<int>(n.envInbox.size()) >= b.queueDepth) {
          overflow = true;
          return false;
        }
        n.envInbox.push_back(EventLabel{obj, "env", eff.message, args});
      } else {
        for (const auto& to :
             partners_of(*m.cd, n.snapshot, obj, cls, eff.target)) {
          if (!carry_allows(m, obj, to, eff.message)) continue;
          auto rt = n.runtime.find(to);
          if (rt == n.runtime.end()) continue;  // passive receiver
          if (static_cast<int>(rt->second.queue.size()) >= b.queueDepth) {
            overflow = true;
            return false;
          }
          rt->second.queue.push_back(EventLabel{obj, to, eff.message, args});
        }
      }
    }
  }
  return invariants_hold(*m.cd, n.snapshot);
}

}  // namespace

std::vector<StepMove> step(const ExecModel& m, const TsState& s,
                           const Bounds& b, GenStats* stats) {
  std::vector<StepMove> moves;

  // Environment injections (hidden).
  for (const auto& [obj, msgs] : m.gates) {
    auto rt = s.runtime.find(obj);
    if (rt == s.runtime.end()) continue;
    const std::string cls = s.snapshot.objects.at(obj).cls;
    for (const auto& msg : msgs) {
      const ReceptionDef* r = m.cd->find_reception(cls, msg);
      if (!r) continue;
      for (const auto& args : arg_tuples(*r)) {
        if (static_cast<int>(rt->second.queue.size()) >= b.queueDepth) {
          if (stats) stats->overflowPruned++;
          continue;
        }
        StepMove mv;
        mv.label = EventLabel{"env", obj, msg, args};
        mv.observable = false;
        mv.next = s;
        mv.next.runtime[obj].queue.push_back(mv.label);
        moves.push_back(std::move(mv));
      }
    }
  }

  // Environment consumption (observable).
  if (!s.envInbox.empty()) {
    StepMove mv;
    mv.label = s.envInbox.front();
    mv.observable = true;
    mv.next = s;
    mv.next.envInbox.erase(mv.next.envInbox.begin());
    moves.push_back(std::move(mv));
  }

  // Dispatches: pop the head event, fire the first enabled transition.
  for (const auto& [obj, rt] : s.runtime) {
    if (rt.queue.empty()) continue;
    const EventLabel ev = rt.queue.front();
    const StateMachine* sm = m.machines.at(obj);
    bool fired = false;
    bool pruned = false;
    for (const auto& t : sm->transitions) {
      if (t.src != rt.control || t.trigger != ev.message) continue;
      if (t.params.size() != ev.args.size()) continue;
      std::map<std::string, Value> params;
      for (size_t i = 0; i < t.params.size(); ++i)
        params[t.params[i]] = ev.args[i];
      if (t.guard) {
        ExprEnv env{&s.snapshot.objects.at(obj).attrs, &params};
        Value g = eval_expr(*t.guard, env);
        if (!std::get<bool>(g)) continue;
      }
      TsState n = s;
      n.runtime[obj].queue.erase(n.runtime[obj].queue.begin());
      n.runtime[obj].control = t.dst;
      bool overflow = false;
      if (!apply_effects(m, t, obj, params, b, n, overflow)) {
        if (overflow) {
          if (stats) stats->overflowPruned++;
          pruned = true;
          break;  // capacity, not enabledness: the move is dropped entirely
        }
        continue;  // disabled candidate; try the next one
      }
      StepMove mv;
      mv.label = ev;
      mv.observable = true;
      mv.next = std::move(n);
      moves.push_back(std::move(mv));
      fired = true;
      break;
    }
    if (!fired && !pruned) {
      // No transition accepts the event: drop it, hidden.
      if (stats) stats->discards++;
      StepMove mv;
      mv.label = ev;
      mv.observable = false;
      mv.next = s;
      mv.next.runtime[obj].queue.erase(mv.next.runtime[obj].queue.begin());
      moves.push_back(std::move(mv));
    }
  }

  return moves;
}

TransitionSystem generate_ts(const ExecModel& m, const Snapshot& init,
                             const Bounds& b, GenStats* stats) {
  TransitionSystem ts;
  std::map<std::string, int> index;
  std::deque<int> work;

  auto intern = [&](TsState st) -> int {
    std::string key = st.encode();
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (static_cast<long long>(ts.states.size()) >= b.maxStates) return -1;
    int id = static_cast<int>(ts.states.size());
    ts.states.push_back(std::move(st));
    index.emplace(std::move(key), id);
    work.push_back(id);
    return id;
  };

  int s0 = intern(initial_state(m, init));
  if (s0 >= 0) ts.initial.push_back(s0);

  bool capped = false;
  std::set<std::tuple<int, std::string, bool, int>> seen;
  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    if (stats) stats->statesExplored++;
    // `step` may grow ts.states; copy the source state first.
    TsState cur = ts.states[static_cast<size_t>(id)];
    for (auto& mv : step(m, cur, b, stats)) {
      int to = intern(std::move(mv.next));
      if (to < 0) {
        capped = true;
        continue;
      }
      if (!seen.insert({id, mv.label.str(), mv.observable, to}).second)
        continue;
      TsTransition tr;
      tr.from = id;
      tr.label = mv.label;
      tr.observable = mv.observable;
      tr.to = to;
      ts.transitions.push_back(tr);
      if (stats) stats->transitionsAdded++;
    }
  }
  if (capped) {
    ts.exploredCompletely = false;
    ts.boundNote = "state cap " + std::to_string(b.maxStates) + " reached";
  }
  return ts;
}

}  // namespace mvcheck
