#include "mvcheck/morphisms.hpp"

#include <algorithm>
#include <functional>

namespace mvcheck {

ClassModel sd2cd_project(const InteractionModel& sd, Diagnostics& diags) {
  ClassModel m;
  m.name = sd.name;
  for (const auto& l : sd.lifelines)
    if (!m.find_class(l.cls)) {
      ClassDef c;
      c.name = l.cls;
      m.classes.push_back(std::move(c));
    }
  auto sig = sd_message_sig(sd);
  std::function<void(const TermPtr&)> visit = [&](const TermPtr& t) {
    if (!t) return;
    if (t->kind == InteractionTerm::Kind::Msg) {
      const SdMessage& msg = t->msg;
      // env-addressed sends are attributed to the sender's class.
      const std::string& owner = msg.to == "env" ? msg.from : msg.to;
      const Lifeline* l = sd.find_lifeline(owner);
      if (l) {
        ClassDef* c = nullptr;
        for (auto& cd : m.classes)
          if (cd.name == l->cls) c = &cd;
        bool have = false;
        for (const auto& r : c->receptions) have = have || r.name == msg.message;
        if (!have) {
          ReceptionDef r;
          r.name = msg.message;
          const auto& slots = sig[msg.message];
          for (size_t i = 0; i < slots.size(); ++i) {
            if (!slots[i]) {
              diags.error(msg.line, 0,
                          "cannot infer the type of argument " +
                              std::to_string(i + 1) + " of message '" +
                              msg.message + "'",
                          CheckNature::Syntactic, CheckScope::Structural);
              continue;
            }
            Param p;
            p.name = "p" + std::to_string(i + 1);
            p.type = *slots[i];
            r.params.push_back(std::move(p));
          }
          c->receptions.push_back(std::move(r));
        }
      }
    }
    for (const auto& ch : t->children) visit(ch);
  };
  visit(sd.root);
  return m;
}

TransitionSystem traces_to_prefix_ts(const TraceSet& t) {
  std::vector<Trace> traces = t.traces;
  if (t.symbolic()) traces = ts_traces(*t.source, t.depth).traces;
  TransitionSystem ts;
  std::map<Trace, int> index;
  auto intern = [&](const Trace& tr) {
    auto it = index.find(tr);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(ts.states.size());
    ts.states.push_back(TsState{});
    index.emplace(tr, id);
    return id;
  };
  int root = intern({});
  ts.initial.push_back(root);
  for (const auto& tr : traces) {
    Trace prefix;
    int cur = root;
    for (const auto& e : tr) {
      prefix.push_back(e);
      bool fresh = !index.count(prefix);
      int nxt = intern(prefix);
      if (fresh) {
        TsTransition edge;
        edge.from = cur;
        edge.label = e;
        edge.observable = true;
        edge.to = nxt;
        ts.transitions.push_back(edge);
      }
      cur = nxt;
    }
  }
  if (t.symbolic()) ts.exploredCompletely = t.source->exploredCompletely;
  return ts;
}

SignatureFilter full_filter_of(const TransitionSystem& ts) {
  SignatureFilter f;
  for (const auto& st : ts.states) {
    for (const auto& [id, o] : st.snapshot.objects) {
      f.classes.insert(o.cls);
      for (const auto& [a, v] : o.attrs) f.attrs.insert({o.cls, a});
    }
    for (const auto& [a, ls] : st.snapshot.links) f.assocs.insert(a);
    for (const auto& [id, rt] : st.runtime)
      for (const auto& e : rt.queue) f.messages.insert(e.message);
    for (const auto& e : st.envInbox) f.messages.insert(e.message);
  }
  for (const auto& tr : ts.transitions) f.messages.insert(tr.label.message);
  return f;
}

const MorphismRegistry& MorphismRegistry::builtin() {
  static const MorphismRegistry reg = [] {
    MorphismRegistry r;

    InstitutionMorphism sd2cd;
    sd2cd.name = "sd2cd";
    sd2cd.from = InstitutionId::SD;
    sd2cd.to = InstitutionId::CD;
    sd2cd.project = [](const Theory& t, Diagnostics& diags) {
      Theory out;
      out.institution = InstitutionId::CD;
      out.name = t.name;
      if (t.interaction) out.data = sd2cd_project(*t.interaction, diags);
      return out;
    };
    sd2cd.translate = [](const Realization& r, const Bounds&) {
      Realization out;
      out.institution = InstitutionId::CD;
      out.ts = std::make_shared<TransitionSystem>(traces_to_prefix_ts(r.traces));
      return out;
    };
    r.morphisms[sd2cd.name] = sd2cd;

    InstitutionMorphism cmp2sd;
    cmp2sd.name = "cmp2sd";
    cmp2sd.from = InstitutionId::CMP;
    cmp2sd.to = InstitutionId::SD;
    cmp2sd.project = [](const Theory& t, Diagnostics&) {
      Theory out;
      out.institution = InstitutionId::SD;
      out.name = t.name;
      out.data = t.data;          // message typing context only
      out.dataSentences = false;  // SD theories assert no class-diagram facts
      return out;
    };
    cmp2sd.translate = [](const Realization& r, const Bounds& b) {
      Realization out;
      out.institution = InstitutionId::SD;
      out.traces.source = r.ts;
      out.traces.depth = b.depth;
      return out;
    };
    r.morphisms[cmp2sd.name] = cmp2sd;

    InstitutionComorphism cd2stm;
    cd2stm.name = "cd2stm";
    cd2stm.from = InstitutionId::CD;
    cd2stm.to = InstitutionId::STM;
    cd2stm.embed = [](const Theory& t, Diagnostics&) {
      Theory out = t;
      out.institution = InstitutionId::STM;
      out.hiddenSource.reset();
      out.hideMorph.clear();
      return out;
    };
    cd2stm.reduce = [](const Realization& r, const Bounds&) {
      Realization out;
      out.institution = InstitutionId::CD;
      if (r.ts)
        out.ts = std::make_shared<TransitionSystem>(
            ts_reduct(*r.ts, full_filter_of(*r.ts)));
      return out;
    };
    r.comorphisms[cd2stm.name] = cd2stm;

    InstitutionComorphism stm2cmp;
    stm2cmp.name = "stm2cmp";
    stm2cmp.from = InstitutionId::STM;
    stm2cmp.to = InstitutionId::CMP;
    stm2cmp.embed = [](const Theory& t, Diagnostics& diags) {
      Theory out = t;
      out.institution = InstitutionId::CMP;
      out.hiddenSource.reset();
      out.hideMorph.clear();
      if (t.machines.size() != 1) {
        diags.error(0, 0,
                    "stm2cmp wraps exactly one machine, theory '" + t.name +
                        "' has " + std::to_string(t.machines.size()));
        return out;
      }
      Component c;
      c.name = t.name.empty() ? "wrapped" : t.name;
      PartDef p;
      p.name = "cid";
      p.cls = t.machines[0].contextClass;
      p.machine = t.machines[0].name;
      c.parts.push_back(std::move(p));
      c.implicitGates = true;
      out.component = std::move(c);
      return out;
    };
    stm2cmp.reduce = [](const Realization& r, const Bounds&) {
      Realization out = r;
      out.institution = InstitutionId::STM;
      return out;
    };
    r.comorphisms[stm2cmp.name] = stm2cmp;

    return r;
  }();
  return reg;
}

}  // namespace mvcheck
