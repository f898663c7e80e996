#include "mvcheck/automaton.hpp"

#include <algorithm>
#include <deque>

namespace mvcheck {

namespace {

bool bind_endpoint(const std::string& pattern, const std::string& actual,
                   BindEnv& env, const std::set<std::string>& lifelines) {
  if (pattern == "env") return actual == "env";
  auto it = env.find(pattern);
  if (it != env.end()) return it->second == Value(actual);
  if (actual == "env") return false;
  // Injectivity: no other lifeline may already hold this object.
  for (const auto& l : lifelines) {
    auto jt = env.find(l);
    if (jt != env.end() && jt->second == Value(actual)) return false;
  }
  env[pattern] = actual;
  return true;
}

}  // namespace

bool EventPattern::matches(const EventLabel& e, BindEnv& env,
                           const std::set<std::string>& lifelines) const {
  if (e.message != message) return false;
  if (e.args.size() != args.size()) return false;
  if (!bind_endpoint(from, e.sender, env, lifelines)) return false;
  if (!bind_endpoint(to, e.receiver, env, lifelines)) return false;
  for (size_t i = 0; i < args.size(); ++i) {
    const ArgPattern& p = args[i];
    switch (p.kind) {
      case ArgPattern::Kind::Literal:
        if (!(e.args[i] == p.literal)) return false;
        break;
      case ArgPattern::Kind::Wildcard:
        break;
      case ArgPattern::Kind::Variable: {
        auto it = env.find(p.var);
        if (it != env.end()) {
          if (!(it->second == e.args[i])) return false;
        } else {
          if (p.declaredType && !value_in_type(e.args[i], *p.declaredType))
            return false;
          env[p.var] = e.args[i];
        }
        break;
      }
    }
  }
  return true;
}

namespace {

struct Builder {
  TraceAutomaton a;

  int fresh() { return a.stateCount++; }

  void eps(int from, int to) {
    NfaEdge e;
    e.from = from;
    e.to = to;
    e.eps = true;
    a.edges.push_back(e);
  }

  // Builds the fragment recognizing t between the two fresh states returned.
  std::pair<int, int> build(const TermPtr& t) {
    switch (t->kind) {
      case InteractionTerm::Kind::Msg: {
        int s = fresh(), e = fresh();
        NfaEdge edge;
        edge.from = s;
        edge.to = e;
        edge.eps = false;
        edge.pat.from = t->msg.from;
        edge.pat.to = t->msg.to;
        edge.pat.message = t->msg.message;
        edge.pat.args = t->msg.args;
        a.edges.push_back(edge);
        a.alphabet.insert(t->msg.message);
        return {s, e};
      }
      case InteractionTerm::Kind::Seq: {
        int s = fresh();
        int cur = s;
        for (const auto& c : t->children) {
          auto [cs, ce] = build(c);
          eps(cur, cs);
          cur = ce;
        }
        return {s, cur};
      }
      case InteractionTerm::Kind::Alt: {
        int s = fresh(), e = fresh();
        for (const auto& c : t->children) {
          auto [cs, ce] = build(c);
          eps(s, cs);
          eps(ce, e);
        }
        return {s, e};
      }
      case InteractionTerm::Kind::Opt: {
        auto [cs, ce] = build(t->children[0]);
        int s = fresh(), e = fresh();
        eps(s, cs);
        eps(ce, e);
        eps(s, e);
        return {s, e};
      }
      case InteractionTerm::Kind::Loop: {
        // lo mandatory copies, then hi-lo copies nested so that the k-th
        // optional copy is reachable only through the (k-1)-th.
        int s = fresh();
        int cur = s;
        for (long long i = 0; i < t->lo; ++i) {
          auto [cs, ce] = build(t->children[0]);
          eps(cur, cs);
          cur = ce;
        }
        int end = fresh();
        eps(cur, end);
        for (long long i = t->lo; i < t->hi; ++i) {
          auto [cs, ce] = build(t->children[0]);
          eps(cur, cs);
          cur = ce;
          eps(cur, end);
        }
        return {s, end};
      }
    }
    return {fresh(), fresh()};
  }
};

}  // namespace

TraceAutomaton sd_to_nfa(const InteractionModel& sd) {
  Builder b;
  auto [s, e] = b.build(sd.root);
  b.a.initial = s;
  b.a.accepting = e;
  for (const auto& l : sd.lifelines) b.a.lifelines.insert(l.name);
  b.a.out.assign(static_cast<size_t>(b.a.stateCount), {});
  for (size_t i = 0; i < b.a.edges.size(); ++i)
    b.a.out[static_cast<size_t>(b.a.edges[i].from)].push_back(
        static_cast<int>(i));
  return b.a;
}

ConfigSet nfa_closure(const TraceAutomaton& a, ConfigSet cs) {
  std::deque<NfaConfig> work(cs.begin(), cs.end());
  while (!work.empty()) {
    NfaConfig c = work.front();
    work.pop_front();
    for (int ei : a.out[static_cast<size_t>(c.state)]) {
      const auto& edge = a.edges[static_cast<size_t>(ei)];
      if (!edge.eps) continue;
      NfaConfig n{edge.to, c.env};
      if (cs.insert(n).second) work.push_back(n);
    }
  }
  return cs;
}

ConfigSet nfa_advance(const TraceAutomaton& a, const ConfigSet& cs,
                      const EventLabel& e) {
  ConfigSet next;
  for (const auto& c : cs) {
    for (int ei : a.out[static_cast<size_t>(c.state)]) {
      const auto& edge = a.edges[static_cast<size_t>(ei)];
      if (edge.eps) continue;
      BindEnv env = c.env;
      if (edge.pat.matches(e, env, a.lifelines))
        next.insert(NfaConfig{edge.to, std::move(env)});
    }
  }
  return nfa_closure(a, std::move(next));
}

bool nfa_accepting(const TraceAutomaton& a, const ConfigSet& cs) {
  for (const auto& c : cs)
    if (c.state == a.accepting) return true;
  return false;
}

bool matches(const Trace& t, const TraceAutomaton& a, const BindEnv& seed) {
  ConfigSet cs = nfa_closure(a, {NfaConfig{a.initial, seed}});
  for (const auto& e : t) {
    if (!a.alphabet.count(e.message)) continue;  // projection
    cs = nfa_advance(a, cs, e);
    if (cs.empty()) return false;
  }
  return nfa_accepting(a, cs);
}

std::vector<BindEnv> lifeline_seeds(const InteractionModel& sd,
                                    const Snapshot& s, const ClassModel* cd) {
  std::vector<BindEnv> seeds{{}};
  for (const auto& l : sd.lifelines) {
    std::vector<std::string> candidates;
    for (const auto& [id, st] : s.objects) {
      bool ok = cd ? cd->is_subclass_of(st.cls, l.cls) : st.cls == l.cls;
      if (ok) candidates.push_back(id);
    }
    std::vector<BindEnv> next;
    for (const auto& env : seeds) {
      for (const auto& id : candidates) {
        bool taken = false;
        for (const auto& [k, v] : env)
          if (v == Value(id)) taken = true;
        if (taken) continue;
        BindEnv e2 = env;
        e2[l.name] = id;
        next.push_back(std::move(e2));
      }
    }
    seeds = std::move(next);
  }
  return seeds;
}

namespace {

struct ProductNode {
  int tsState = 0;
  ConfigSet configs;
  bool operator<(const ProductNode& o) const {
    return tsState != o.tsState ? tsState < o.tsState : configs < o.configs;
  }
};

}  // namespace

bool ts_satisfies_sd(const TransitionSystem& ts, const InteractionModel& sd,
                     const ClassModel* cd, long long maxProductStates,
                     bool* complete, Trace* witnessRaw,
                     long long* productStates) {
  TraceAutomaton a = sd_to_nfa(sd);
  auto edges = ts.out_edges();
  std::map<ProductNode, int> index;
  std::vector<ProductNode> nodes;
  std::vector<int> parent;       // node -> predecessor node
  std::vector<int> parentEdge;   // node -> ts transition index used
  std::deque<int> work;
  bool capped = false;

  auto intern = [&](ProductNode n, int par, int viaEdge) -> int {
    auto it = index.find(n);
    if (it != index.end()) return -1;
    if (static_cast<long long>(nodes.size()) >= maxProductStates) {
      capped = true;
      return -1;
    }
    int id = static_cast<int>(nodes.size());
    index.emplace(n, id);
    nodes.push_back(std::move(n));
    parent.push_back(par);
    parentEdge.push_back(viaEdge);
    work.push_back(id);
    return id;
  };

  auto emit_witness = [&](int id) {
    if (!witnessRaw) return;
    Trace rev;
    for (int cur = id; parent[static_cast<size_t>(cur)] >= 0;
         cur = parent[static_cast<size_t>(cur)]) {
      const auto& tr =
          ts.transitions[static_cast<size_t>(parentEdge[static_cast<size_t>(cur)])];
      if (tr.observable) rev.push_back(tr.label);
    }
    std::reverse(rev.begin(), rev.end());
    *witnessRaw = std::move(rev);
  };

  for (int init : ts.initial) {
    ConfigSet cs;
    for (const auto& seed :
         lifeline_seeds(sd, ts.states[static_cast<size_t>(init)].snapshot, cd))
      cs.insert(NfaConfig{a.initial, seed});
    cs = nfa_closure(a, std::move(cs));
    if (cs.empty()) continue;  // no lifeline binding possible
    intern(ProductNode{init, std::move(cs)}, -1, -1);
  }

  bool found = false;
  int foundAt = -1;
  while (!work.empty() && !found) {
    int id = work.front();
    work.pop_front();
    if (nfa_accepting(a, nodes[static_cast<size_t>(id)].configs)) {
      found = true;
      foundAt = id;
      break;
    }
    for (int ei : edges[static_cast<size_t>(nodes[static_cast<size_t>(id)].tsState)]) {
      const auto& tr = ts.transitions[static_cast<size_t>(ei)];
      ConfigSet next;
      if (tr.observable && a.alphabet.count(tr.label.message)) {
        next = nfa_advance(a, nodes[static_cast<size_t>(id)].configs, tr.label);
        if (next.empty()) continue;  // dead branch
      } else {
        next = nodes[static_cast<size_t>(id)].configs;
      }
      intern(ProductNode{tr.to, std::move(next)}, id, ei);
    }
  }

  if (productStates) *productStates = static_cast<long long>(nodes.size());
  if (found) {
    if (complete) *complete = true;  // a positive verdict is exact
    emit_witness(foundAt);
    return true;
  }
  if (complete) *complete = !capped && ts.exploredCompletely;
  return false;
}

namespace {

bool is_maximal(const Trace& t, const std::vector<Trace>& all) {
  for (const auto& u : all)
    if (u.size() == t.size() + 1 && std::equal(t.begin(), t.end(), u.begin()))
      return false;
  return true;
}

}  // namespace

bool sd_satisfies(const TraceSet& T, const InteractionModel& sd,
                  const ClassModel* cd, bool existsMode,
                  long long maxProductStates, bool* complete, Trace* witness,
                  long long* productStates) {
  if (complete) *complete = true;
  if (T.symbolic() && existsMode)
    return ts_satisfies_sd(*T.source, sd, cd, maxProductStates, complete,
                           witness, productStates);
  std::vector<Trace> traces = T.traces;
  if (T.symbolic()) {
    bool cut = false;
    traces = ts_traces(*T.source, T.depth, maxProductStates, &cut).traces;
    if (complete) *complete = T.source->exploredCompletely && !cut;
  }
  if (productStates) *productStates = (long long)traces.size();
  TraceAutomaton a = sd_to_nfa(sd);
  if (existsMode) {
    for (const auto& t : traces)
      if (matches(t, a)) {
        if (witness) *witness = t;
        return true;
      }
    return false;
  }
  for (const auto& t : traces) {
    if (!is_maximal(t, traces)) continue;
    if (!matches(t, a)) {
      if (witness) *witness = t;  // counterexample
      return false;
    }
  }
  return true;
}

}  // namespace mvcheck
