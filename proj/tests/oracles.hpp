#pragma once

// Independent reference implementations the tests cross-check library
// results against: exhaustive labeled snapshot enumeration quotiented by
// isomorphism, a denotational interaction-term matcher, and randomized
// theory/morphism/realization triples for satisfaction-condition probes.

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mvcheck/cd.hpp"
#include "mvcheck/kernel.hpp"
#include "mvcheck/sd.hpp"
#include "mvcheck/snapshot.hpp"
#include "mvcheck/ts.hpp"

namespace oracle {

using namespace mvcheck;

// ---- exhaustive labeled enumeration, quotiented by isomorphism ----

// Every attribute valuation of `cls`, in odometer order.
inline std::vector<std::map<std::string, Value>> valuations(
    const ClassModel& m, const std::string& cls) {
  std::vector<AttrDef> attrs = m.all_attrs(cls);
  std::vector<std::vector<Value>> dom;
  for (const auto& a : attrs) dom.push_back(type_values(a.type));
  std::vector<std::map<std::string, Value>> out;
  std::vector<size_t> idx(attrs.size(), 0);
  while (true) {
    std::map<std::string, Value> v;
    for (size_t i = 0; i < attrs.size(); ++i) v[attrs[i].name] = dom[i][idx[i]];
    out.push_back(std::move(v));
    size_t k = 0;
    for (; k < idx.size(); ++k) {
      if (++idx[k] < dom[k].size()) break;
      idx[k] = 0;
    }
    if (k == idx.size()) break;
  }
  return out;
}

// Every labeled snapshot with at most maxN objects per class (fixed ids
// Cls#i) and every link subset. No conformance filter.
inline std::vector<Snapshot> all_labeled(const ClassModel& m, int maxN) {
  std::vector<std::string> cls;
  for (const auto& c : m.classes) cls.push_back(c.name);
  std::vector<Snapshot> outs;
  std::vector<int> counts(cls.size(), 0);
  while (true) {
    std::vector<std::pair<std::string, std::string>> objs;  // id, class
    for (size_t ci = 0; ci < cls.size(); ++ci)
      for (int i = 0; i < counts[ci]; ++i)
        objs.push_back({cls[ci] + "#" + std::to_string(i), cls[ci]});
    std::vector<std::vector<std::map<std::string, Value>>> vdom;
    for (const auto& [id, c] : objs) vdom.push_back(valuations(m, c));
    std::vector<size_t> vi(objs.size(), 0);
    while (true) {
      Snapshot base;
      for (size_t i = 0; i < objs.size(); ++i) {
        ObjectState st;
        st.cls = objs[i].second;
        st.attrs = vdom[i][vi[i]];
        base.objects[objs[i].first] = std::move(st);
      }
      std::vector<std::pair<std::string, std::pair<std::string, std::string>>>
          cand;
      for (const auto& a : m.assocs)
        for (const auto& [ida, sa] : base.objects)
          for (const auto& [idb, sb] : base.objects)
            if (m.is_subclass_of(sa.cls, a.a.cls) &&
                m.is_subclass_of(sb.cls, a.b.cls))
              cand.push_back({a.name, {ida, idb}});
      for (size_t mask = 0; mask < (size_t(1) << cand.size()); ++mask) {
        Snapshot s = base;
        for (size_t bit = 0; bit < cand.size(); ++bit)
          if (mask >> bit & 1)
            s.links[cand[bit].first].insert(cand[bit].second);
        outs.push_back(std::move(s));
      }
      size_t k = 0;
      for (; k < vi.size(); ++k) {
        if (++vi[k] < vdom[k].size()) break;
        vi[k] = 0;
      }
      if (k == vi.size()) break;
    }
    size_t k = 0;
    for (; k < counts.size(); ++k) {
      if (++counts[k] <= maxN) break;
      counts[k] = 0;
    }
    if (k == counts.size()) break;
  }
  return outs;
}

// Canonical key of a snapshot: minimum serialization over all within-class
// object renamings (ids in `fixed` are left untouched).
inline std::string iso_key(const Snapshot& s,
                           const std::set<std::string>& fixed = {}) {
  std::map<std::string, std::vector<std::string>> byCls;
  for (const auto& [id, st] : s.objects)
    if (!fixed.count(id)) byCls[st.cls].push_back(id);
  std::vector<std::string> clsOrder;
  std::vector<std::vector<std::vector<std::string>>> perms;
  for (auto& [c, ids] : byCls) {
    clsOrder.push_back(c);
    std::sort(ids.begin(), ids.end());
    std::vector<std::vector<std::string>> ps;
    std::vector<std::string> p = ids;
    do ps.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    perms.push_back(std::move(ps));
  }
  std::string best;
  bool first = true;
  std::vector<size_t> pick(clsOrder.size(), 0);
  while (true) {
    std::map<std::string, std::string> ren;
    for (const auto& [id, st] : s.objects)
      if (fixed.count(id)) ren[id] = "!" + id;  // rigid ids sort apart
    for (size_t ci = 0; ci < clsOrder.size(); ++ci) {
      const auto& ord = perms[ci][pick[ci]];
      for (size_t i = 0; i < ord.size(); ++i)
        ren[ord[i]] = clsOrder[ci] + "@" + std::to_string(i);
    }
    std::vector<std::string> lines;
    for (const auto& [id, st] : s.objects) {
      std::string l = ren[id] + ":" + st.cls;
      for (const auto& [a, v] : st.attrs) l += "," + a + "=" + value_str(v);
      lines.push_back(std::move(l));
    }
    for (const auto& [as, ls] : s.links)
      for (const auto& [x, y] : ls)
        lines.push_back("L:" + as + "(" + ren[x] + "," + ren[y] + ")");
    std::sort(lines.begin(), lines.end());
    std::string key;
    for (const auto& l : lines) key += l + "\n";
    if (first || key < best) {
      best = std::move(key);
      first = false;
    }
    size_t k = 0;
    for (; k < pick.size(); ++k) {
      if (++pick[k] < perms[k].size()) break;
      pick[k] = 0;
    }
    if (k == pick.size()) break;
  }
  return best;
}

// Number of isomorphism classes of conformant snapshots with at most maxN
// objects per class.
inline size_t iso_count(const ClassModel& m, int maxN) {
  std::set<std::string> keys;
  for (const auto& s : all_labeled(m, maxN))
    if (conforms(s, m)) keys.insert(iso_key(s));
  return keys.size();
}

// ---- denotational interaction matcher over a fixed two-lifeline stage ----

inline TermPtr mk(InteractionTerm t) {
  return std::make_shared<InteractionTerm>(std::move(t));
}

// m1: a->b, m2: b->a, m3: a->b; argument-free.
inline TermPtr msg_term(const std::string& name) {
  InteractionTerm t;
  t.kind = InteractionTerm::Kind::Msg;
  t.msg.message = name;
  t.msg.from = name == "m2" ? "b" : "a";
  t.msg.to = name == "m2" ? "a" : "b";
  return mk(std::move(t));
}

inline InteractionModel wrap_term(TermPtr root) {
  InteractionModel sd;
  sd.name = "T";
  sd.lifelines = {{"a", "A", 0}, {"b", "B", 0}};
  sd.root = std::move(root);
  return sd;
}

// The language of a term, as message-name sequences (finite: loop bounds
// are unrolled).
inline std::set<std::vector<std::string>> olang(const TermPtr& t) {
  std::set<std::vector<std::string>> L;
  if (!t) {
    L.insert({});
    return L;
  }
  auto concat = [](const std::set<std::vector<std::string>>& A,
                   const std::set<std::vector<std::string>>& B) {
    std::set<std::vector<std::string>> out;
    for (const auto& a : A)
      for (const auto& b : B) {
        auto ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        out.insert(std::move(ab));
      }
    return out;
  };
  switch (t->kind) {
    case InteractionTerm::Kind::Msg:
      L.insert({t->msg.message});
      break;
    case InteractionTerm::Kind::Seq: {
      L.insert({});
      for (const auto& c : t->children) L = concat(L, olang(c));
      break;
    }
    case InteractionTerm::Kind::Alt:
      for (const auto& c : t->children) {
        auto Lc = olang(c);
        L.insert(Lc.begin(), Lc.end());
      }
      break;
    case InteractionTerm::Kind::Opt:
      L = olang(t->children.at(0));
      L.insert({});
      break;
    case InteractionTerm::Kind::Loop: {
      auto Lc = olang(t->children.at(0));
      std::set<std::vector<std::string>> cur;
      cur.insert({});
      if (t->lo == 0) L.insert({});
      for (long long i = 1; i <= t->hi; ++i) {
        cur = concat(cur, Lc);
        if (i >= t->lo) L.insert(cur.begin(), cur.end());
      }
      break;
    }
  }
  return L;
}

// Random term over {m1,m2,m3} with bounded size and loop bounds <= 3.
inline TermPtr rand_term(std::mt19937& rng, int depth, int& budget) {
  auto pick = [&](int n) { return int(rng() % unsigned(n)); };
  const char* names[3] = {"m1", "m2", "m3"};
  --budget;
  int r = pick(100);
  if (depth <= 0 || budget <= 0 || r < 40) return msg_term(names[pick(3)]);
  if (r < 60) {
    InteractionTerm t;
    t.kind = InteractionTerm::Kind::Seq;
    int n = 2 + pick(2);
    for (int i = 0; i < n; ++i)
      t.children.push_back(rand_term(rng, depth - 1, budget));
    return mk(std::move(t));
  }
  if (r < 76) {
    InteractionTerm t;
    t.kind = InteractionTerm::Kind::Alt;
    t.children.push_back(rand_term(rng, depth - 1, budget));
    t.children.push_back(rand_term(rng, depth - 1, budget));
    return mk(std::move(t));
  }
  if (r < 88) {
    InteractionTerm t;
    t.kind = InteractionTerm::Kind::Opt;
    t.children.push_back(rand_term(rng, depth - 1, budget));
    return mk(std::move(t));
  }
  InteractionTerm t;
  t.kind = InteractionTerm::Kind::Loop;
  t.lo = pick(3);
  t.hi = t.lo + pick(int(4 - t.lo));
  t.children.push_back(rand_term(rng, depth - 1, budget));
  return mk(std::move(t));
}

// The concrete event a message name denotes on the fixed stage where
// lifeline a is object "oa" and b is "ob".
inline EventLabel stage_event(const std::string& name) {
  EventLabel e;
  e.message = name;
  e.sender = name == "m2" ? "ob" : "oa";
  e.receiver = name == "m2" ? "oa" : "ob";
  return e;
}

// ---- randomized CD satisfaction-condition triples ----

struct SatTriple {
  Theory source;           // theory over the source signature
  SignatureMorphism sig;   // source -> target renaming
  ClassModel target;       // renamed signature
  Realization real;        // realization over the target
  Sentence phi;            // sentence over the source
};

inline SatTriple rand_triple(std::mt19937& rng) {
  auto pick = [&](int n) { return int(rng() % unsigned(n)); };
  int ghi = 1 + pick(3);
  const char* mults[4] = {"[*]", "[0..1]", "[1..1]", "[0..2]"};
  const char* ops[4] = {"<=", "<", "==", "!="};
  std::string cd =
      "classdiagram S\n"
      "class C1 { attr f : Bool  attr g : Int 0 .. " + std::to_string(ghi) +
      "  reception r(p : Bool) }\n"
      "class C2 { attr h : Int 0 .. 1 }\n"
      "assoc A : C1 " + mults[pick(4)] + " x -- y " + mults[pick(4)] +
      " C2\n"
      "inv C1 : self.g " + ops[pick(4)] + " " + std::to_string(pick(ghi + 1)) +
      "\n";
  Diagnostics d;
  SatTriple t;
  t.source.institution = InstitutionId::CD;
  t.source.name = "S";
  t.source.data = parse_cd(cd, d);

  t.sig.institution = InstitutionId::CD;
  t.sig.classMap = {{"C1", "D1"}, {"C2", "D2"}};
  t.sig.attrMap = {{{"C1", "f"}, "u"}, {{"C1", "g"}, "w"}, {{"C2", "h"}, "z"}};
  t.sig.assocMap = {{"A", "B"}};
  t.sig.msgMap = {{"r", "q"}};
  t.target = rename_class_model(t.source.data, t.sig);

  // Random transition system over the target: a few states with arbitrary
  // well-typed snapshots, a few labeled edges.
  auto ts = std::make_shared<TransitionSystem>();
  int nStates = 1 + pick(3);
  std::vector<std::vector<std::string>> ids(nStates);
  for (int si = 0; si < nStates; ++si) {
    TsState st;
    for (const auto& c : t.target.classes) {
      int n = pick(3);
      for (int i = 0; i < n; ++i) {
        std::string id = c.name + std::to_string(i);
        ObjectState os;
        os.cls = c.name;
        for (const auto& a : t.target.all_attrs(c.name)) {
          auto vals = type_values(a.type);
          os.attrs[a.name] = vals[pick(int(vals.size()))];
        }
        st.snapshot.objects[id] = std::move(os);
        ids[si].push_back(id);
      }
    }
    for (const auto& a : t.target.assocs)
      for (const auto& [ida, sa] : st.snapshot.objects)
        for (const auto& [idb, sb] : st.snapshot.objects)
          if (sa.cls == a.a.cls && sb.cls == a.b.cls && pick(2))
            st.snapshot.links[a.name].insert({ida, idb});
    ts->states.push_back(std::move(st));
  }
  ts->initial = {0};
  for (int k = 0; k < nStates; ++k) {
    TsTransition tr;
    tr.from = pick(nStates);
    tr.to = pick(nStates);
    tr.label.message = "q";
    tr.label.sender = "env";
    tr.label.receiver = ids[tr.from].empty() ? "env" : ids[tr.from][0];
    tr.label.args = {Value(pick(2) == 0)};
    tr.observable = true;
    ts->transitions.push_back(std::move(tr));
  }
  t.real.institution = InstitutionId::CD;
  t.real.ts = ts;

  auto sents = t.source.sentences();
  t.phi = sents.at(pick(int(sents.size())));
  return t;
}

}  // namespace oracle
