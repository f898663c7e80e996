#include "mvcheck/kernel.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "mvcheck/automaton.hpp"

namespace mvcheck {

std::string institution_name(InstitutionId id) {
  switch (id) {
    case InstitutionId::CD: return "CD";
    case InstitutionId::STM: return "STM";
    case InstitutionId::CMP: return "CMP";
    case InstitutionId::SD: return "SD";
  }
  return "?";
}

const StateMachine* Theory::find_machine(const std::string& n) const {
  for (const auto& m : machines)
    if (m.name == n) return &m;
  return nullptr;
}

std::vector<Sentence> Theory::sentences() const {
  std::vector<Sentence> out;
  auto ctx = std::make_shared<ClassModel>(data);
  if (dataSentences) {
    for (const auto& cs : cd_sentences(data)) {
      Sentence s;
      s.kind = Sentence::Kind::Data;
      s.data = cs;
      s.ctx = ctx;
      out.push_back(std::move(s));
    }
  }
  if (institution == InstitutionId::STM || institution == InstitutionId::CMP) {
    for (const auto& m : machines) {
      auto mp = std::make_shared<StateMachine>(m);
      for (int k = -1; k < static_cast<int>(m.transitions.size()); ++k) {
        Sentence s;
        s.kind = Sentence::Kind::Machine;
        s.machine = mp;
        s.clause = k;
        s.ctx = ctx;
        out.push_back(std::move(s));
      }
    }
  }
  if (institution == InstitutionId::SD && interaction) {
    Sentence s;
    s.kind = Sentence::Kind::Interaction;
    s.interaction = interaction;
    s.existsMode = sdExists;
    s.ctx = ctx;
    out.push_back(std::move(s));
  }
  for (const auto& od : anchors) {
    Sentence s;
    s.kind = Sentence::Kind::Anchor;
    s.anchor = od;
    s.ctx = ctx;
    out.push_back(std::move(s));
  }
  return out;
}

std::string Theory::signature_text() const {
  std::ostringstream os;
  os << "institution " << institution_name(institution) << "\n";

  if (institution == InstitutionId::SD) {
    // Lifelines and message arities; either from the interaction itself or,
    // for a projected component, from parts and their receptions.
    std::vector<std::pair<std::string, std::string>> lifelines;
    std::map<std::string, std::vector<std::string>> msgs;
    if (interaction) {
      for (const auto& l : interaction->lifelines)
        lifelines.push_back({l.name, l.cls});
      for (const auto& [name, slots] : sd_message_sig(*interaction)) {
        std::vector<std::string> tys;
        for (const auto& t : slots) tys.push_back(t ? t->str() : "?");
        msgs[name] = tys;
      }
    } else if (hiddenSource) {
      const ClassModel& cd = hiddenSource->data;
      for (const auto& p : hiddenSource->component.parts) {
        lifelines.push_back({p.name, p.cls});
        for (const auto& r : cd.all_receptions(p.cls)) {
          std::vector<std::string> tys;
          for (const auto& prm : r.params) tys.push_back(prm.type.str());
          msgs[r.name] = tys;
        }
      }
    }
    std::sort(lifelines.begin(), lifelines.end());
    for (const auto& [n, c] : lifelines) os << "lifeline " << n << " : " << c << "\n";
    for (const auto& [n, tys] : msgs) {
      os << "msg " << n << "(";
      for (size_t i = 0; i < tys.size(); ++i) os << (i ? ", " : "") << tys[i];
      os << ")\n";
    }
    return os.str();
  }

  std::vector<const ClassDef*> cls;
  for (const auto& c : data.classes) cls.push_back(&c);
  std::sort(cls.begin(), cls.end(),
            [](const ClassDef* a, const ClassDef* b) { return a->name < b->name; });
  for (const ClassDef* c : cls) {
    os << "class " << c->name;
    if (!c->parent.empty()) os << " extends " << c->parent;
    os << "\n";
    std::vector<AttrDef> attrs = c->attrs;
    std::sort(attrs.begin(), attrs.end(),
              [](const AttrDef& a, const AttrDef& b) { return a.name < b.name; });
    for (const auto& a : attrs)
      os << "  attr " << a.name << " : " << a.type.str() << "\n";
    std::vector<ReceptionDef> rcps = c->receptions;
    std::sort(rcps.begin(), rcps.end(),
              [](const ReceptionDef& a, const ReceptionDef& b) {
                return a.name < b.name;
              });
    for (const auto& r : rcps) {
      os << "  rcpt " << r.name << "(";
      for (size_t i = 0; i < r.params.size(); ++i)
        os << (i ? ", " : "") << r.params[i].type.str();
      os << ")\n";
    }
  }
  std::vector<const AssocDef*> assocs;
  for (const auto& a : data.assocs) assocs.push_back(&a);
  std::sort(assocs.begin(), assocs.end(),
            [](const AssocDef* a, const AssocDef* b) { return a->name < b->name; });
  for (const AssocDef* a : assocs)
    os << "assoc " << a->name << " : " << a->a.cls << " " << a->a.role << " -- "
       << a->b.role << " " << a->b.cls << "\n";

  if (institution == InstitutionId::STM || institution == InstitutionId::CMP) {
    std::vector<const StateMachine*> ms;
    for (const auto& m : machines) ms.push_back(&m);
    std::sort(ms.begin(), ms.end(), [](const StateMachine* a, const StateMachine* b) {
      return a->name < b->name;
    });
    for (const StateMachine* m : ms)
      os << "machine " << m->name << " for " << m->contextClass << "\n";
  }
  if (institution == InstitutionId::CMP) {
    std::vector<std::string> lines;
    for (const auto& p : component.parts)
      lines.push_back("part " + p.name + " : " + p.cls +
                      (p.machine.empty() ? "" : " machine " + p.machine));
    for (const auto& c : component.connectors) {
      std::string a = std::min(c.a, c.b), b = std::max(c.a, c.b);
      std::string l = "connector " + a + " -- " + b;
      std::vector<std::string> ms = c.messages;
      std::sort(ms.begin(), ms.end());
      for (const auto& m : ms) l += " " + m;
      lines.push_back(l);
    }
    for (const auto& g : component.gates) {
      std::string l = "gate " + g.name + " -> " + g.part;
      std::vector<std::string> ms = g.messages;
      std::sort(ms.begin(), ms.end());
      for (const auto& m : ms) l += " " + m;
      lines.push_back(l);
    }
    if (component.implicitGates) lines.push_back("gates implicit");
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) os << l << "\n";
  }
  return os.str();
}

std::string Sentence::str() const {
  switch (kind) {
    case Kind::Data: return data.str();
    case Kind::Machine:
      if (clause < 0)
        return "machine " + machine->name + " starts at " + machine->initial +
               " and only declared transitions fire";
      return "machine " + machine->name + ": " +
             machine->transitions[static_cast<size_t>(clause)].str();
    case Kind::Interaction:
      return std::string(existsMode ? "some trace matches "
                                    : "all maximal traces match ") +
             interaction->name;
    case Kind::Anchor: return "initially embeds " + anchor.name;
  }
  return "?";
}

// ---- machine clause satisfaction ------------------------------------------

namespace {

bool is_governed(const ClassModel& cd, const StateMachine& sm,
                 const TsState& st, const std::string& obj) {
  auto it = st.snapshot.objects.find(obj);
  if (it == st.snapshot.objects.end()) return false;
  return cd.is_subclass_of(it->second.cls, sm.contextClass);
}

bool local_invariants_ok(const ClassModel& cd, const std::string& cls,
                         const std::map<std::string, Value>& attrs) {
  for (const auto& inv : cd.invariants) {
    if (!cd.is_subclass_of(cls, inv.cls)) continue;
    ExprEnv env{&attrs, nullptr};
    if (!std::get<bool>(eval_expr(*inv.expr, env))) return false;
  }
  return true;
}

// Applies the transition's assignments; nullopt when a value leaves its
// attribute's range or a self-invariant breaks.
std::optional<std::map<std::string, Value>> replay_assigns(
    const ClassModel& cd, const std::string& cls, const MachineTransition& t,
    std::map<std::string, Value> attrs,
    const std::map<std::string, Value>& params) {
  for (const auto& eff : t.effects) {
    if (eff.kind != Effect::Kind::Assign) continue;
    ExprEnv env{&attrs, &params};
    Value v = eval_expr(*eff.value, env);
    const Type* ty = nullptr;
    for (const auto& a : cd.all_attrs(cls))
      if (a.name == eff.attr) ty = &a.type;
    if (!ty || !value_in_type(v, *ty)) return std::nullopt;
    attrs[eff.attr] = v;
  }
  if (!local_invariants_ok(cd, cls, attrs)) return std::nullopt;
  return attrs;
}

// Index of the first transition the event enables from `control`, or -1
// when the event would be discarded.
int selected_clause(const ClassModel& cd, const StateMachine& sm,
                    const std::string& control, const std::string& cls,
                    const std::map<std::string, Value>& attrs,
                    const EventLabel& ev,
                    std::map<std::string, Value>* boundParams = nullptr) {
  for (size_t k = 0; k < sm.transitions.size(); ++k) {
    const auto& t = sm.transitions[k];
    if (t.src != control || t.trigger != ev.message) continue;
    if (t.params.size() != ev.args.size()) continue;
    std::map<std::string, Value> params;
    for (size_t i = 0; i < t.params.size(); ++i) params[t.params[i]] = ev.args[i];
    if (t.guard) {
      ExprEnv env{&attrs, &params};
      if (!std::get<bool>(eval_expr(*t.guard, env))) continue;
    }
    if (!replay_assigns(cd, cls, t, attrs, params)) continue;
    if (boundParams) *boundParams = params;
    return static_cast<int>(k);
  }
  return -1;
}

bool machine_clause_holds(const TransitionSystem& ts, const StateMachine& sm,
                          const ClassModel& cd, int clause, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (clause < 0) {
    for (int i : ts.initial) {
      const TsState& st = ts.states[static_cast<size_t>(i)];
      for (const auto& [obj, rt] : st.runtime) {
        if (!is_governed(cd, sm, st, obj)) continue;
        if (rt.control != sm.initial)
          return fail("object '" + obj + "' starts at '" + rt.control +
                      "', machine " + sm.name + " starts at '" + sm.initial + "'");
      }
    }
  }
  auto edges = ts.out_edges();
  for (size_t si = 0; si < ts.states.size(); ++si) {
    const TsState& st = ts.states[si];
    for (const auto& [obj, rt] : st.runtime) {
      if (!is_governed(cd, sm, st, obj) || rt.queue.empty()) continue;
      const EventLabel& ev = rt.queue.front();
      const std::string& cls = st.snapshot.objects.at(obj).cls;
      std::map<std::string, Value> params;
      int sel = selected_clause(cd, sm, rt.control, cls,
                                st.snapshot.objects.at(obj).attrs, ev, &params);
      if (clause < 0) {
        if (sel != -1) continue;
        // Discard contract: an unhandled head event never fires observably.
        for (int ei : edges[si]) {
          const auto& tr = ts.transitions[static_cast<size_t>(ei)];
          if (tr.observable && tr.label == ev)
            return fail("object '" + obj + "' fires unhandled event " +
                        ev.str());
        }
        continue;
      }
      if (sel != clause) continue;
      const auto& t = sm.transitions[static_cast<size_t>(clause)];
      auto attrs = replay_assigns(cd, cls, t,
                                  st.snapshot.objects.at(obj).attrs, params);
      for (int ei : edges[si]) {
        const auto& tr = ts.transitions[static_cast<size_t>(ei)];
        if (!tr.observable || !(tr.label == ev)) continue;
        const TsState& nx = ts.states[static_cast<size_t>(tr.to)];
        auto nrt = nx.runtime.find(obj);
        if (nrt == nx.runtime.end() || nrt->second.control != t.dst)
          return fail("firing " + ev.str() + " at '" + obj +
                      "' must reach control '" + t.dst + "'");
        auto no = nx.snapshot.objects.find(obj);
        if (no == nx.snapshot.objects.end() || !attrs || no->second.attrs != *attrs)
          return fail("firing " + ev.str() + " at '" + obj +
                      "' leaves wrong attribute values");
      }
    }
  }
  return true;
}

}  // namespace

bool satisfies(const Realization& r, const Sentence& s, const Bounds& b,
               bool* exact, std::string* why, Trace* witness,
               long long* productStates) {
  if (exact) *exact = true;
  switch (s.kind) {
    case Sentence::Kind::Data: {
      if (!r.ts) {
        if (why) *why = "no transition system to check data sentence on";
        return false;
      }
      for (size_t i = 0; i < r.ts->states.size(); ++i) {
        if (!holds_sentence(r.ts->states[i].snapshot, *s.ctx, s.data)) {
          if (why)
            *why = "state " + std::to_string(i) + " violates: " + s.data.str();
          return false;
        }
      }
      if (exact) *exact = r.ts->exploredCompletely;
      return true;
    }
    case Sentence::Kind::Anchor: {
      if (!r.ts) {
        if (why) *why = "no transition system to check anchor on";
        return false;
      }
      for (int i : r.ts->initial) {
        if (!embeds(r.ts->states[static_cast<size_t>(i)].snapshot,
                    s.anchor.snapshot)) {
          if (why) *why = "initial snapshot does not embed " + s.anchor.name;
          return false;
        }
      }
      return true;
    }
    case Sentence::Kind::Machine: {
      if (!r.ts) {
        if (why) *why = "no transition system to check machine clause on";
        return false;
      }
      bool ok = machine_clause_holds(*r.ts, *s.machine, *s.ctx, s.clause, why);
      if (ok && exact) *exact = r.ts->exploredCompletely;
      return ok;
    }
    case Sentence::Kind::Interaction: {
      TraceSet T = r.traces;
      if (!T.symbolic() && T.traces.empty() && r.ts) {
        T.source = r.ts;
        T.depth = b.depth;
      }
      const ClassModel* cd = (s.ctx && !s.ctx->empty()) ? s.ctx.get() : nullptr;
      bool complete = true;
      Trace wit;
      bool ok = sd_satisfies(T, *s.interaction, cd, s.existsMode, b.maxStates,
                             &complete, &wit, productStates);
      // A found trace is a certificate on its own; every other verdict is
      // only exact when the trace set was explored completely.
      if (exact) *exact = (s.existsMode && ok) ? true : complete;
      if (witness && ok && s.existsMode) *witness = wit;
      if (!ok && why) {
        *why = s.existsMode
                   ? "no trace realizes " + s.interaction->name
                   : "maximal trace escapes " + s.interaction->name + ": " +
                         trace_str(wit);
      }
      return ok;
    }
  }
  return false;
}

// ---- renaming ---------------------------------------------------------------

namespace {

std::string ren(const std::map<std::string, std::string>& m,
                const std::string& k) {
  auto it = m.find(k);
  return it == m.end() ? k : it->second;
}

// Renaming of attribute `attr` as seen from class `cls`, walking up the
// inheritance chain of the original model for the declaring class.
std::string ren_attr(const SignatureMorphism& s, const ClassModel& before,
                     const std::string& cls, const std::string& attr) {
  std::string c = cls;
  while (!c.empty()) {
    auto it = s.attrMap.find({c, attr});
    if (it != s.attrMap.end()) return it->second;
    const ClassDef* d = before.find_class(c);
    if (!d) break;
    c = d->parent;
  }
  return attr;
}

ExprPtr rename_expr(const ExprPtr& e,
                    const std::function<std::string(const std::string&)>& attr) {
  if (!e) return e;
  auto n = std::make_shared<Expr>(*e);
  if (e->kind == Expr::Kind::SelfAttr) n->text = attr(e->text);
  n->lhs = rename_expr(e->lhs, attr);
  n->rhs = rename_expr(e->rhs, attr);
  return n;
}

}  // namespace

SignatureMorphism inverse(const SignatureMorphism& s) {
  SignatureMorphism out;
  out.institution = s.institution;
  for (const auto& [k, v] : s.classMap) out.classMap[v] = k;
  for (const auto& [k, v] : s.attrMap)
    out.attrMap[{ren(s.classMap, k.first), v}] = k.second;
  for (const auto& [k, v] : s.assocMap) out.assocMap[v] = k;
  for (const auto& [k, v] : s.msgMap) out.msgMap[v] = k;
  for (const auto& [k, v] : s.partMap) out.partMap[v] = k;
  return out;
}

ClassModel rename_class_model(const ClassModel& m, const SignatureMorphism& s) {
  ClassModel out;
  out.name = m.name;
  for (const auto& c : m.classes) {
    ClassDef d = c;
    d.name = ren(s.classMap, c.name);
    d.parent = ren(s.classMap, c.parent);
    for (auto& a : d.attrs) a.name = ren_attr(s, m, c.name, a.name);
    for (auto& r : d.receptions) r.name = ren(s.msgMap, r.name);
    out.classes.push_back(std::move(d));
  }
  for (const auto& a : m.assocs) {
    AssocDef d = a;
    d.name = ren(s.assocMap, a.name);
    d.a.cls = ren(s.classMap, a.a.cls);
    d.b.cls = ren(s.classMap, a.b.cls);
    out.assocs.push_back(std::move(d));
  }
  for (const auto& i : m.invariants) {
    Invariant inv = i;
    inv.cls = ren(s.classMap, i.cls);
    inv.expr = rename_expr(
        i.expr, [&](const std::string& a) { return ren_attr(s, m, i.cls, a); });
    out.invariants.push_back(std::move(inv));
  }
  return out;
}

Snapshot rename_snapshot(const Snapshot& sn, const SignatureMorphism& s,
                         const ClassModel& before) {
  Snapshot out;
  for (const auto& [id, st] : sn.objects) {
    ObjectState o;
    o.cls = ren(s.classMap, st.cls);
    for (const auto& [a, v] : st.attrs)
      o.attrs[ren_attr(s, before, st.cls, a)] = v;
    out.objects[id] = std::move(o);
  }
  for (const auto& [a, ls] : sn.links) out.links[ren(s.assocMap, a)] = ls;
  return out;
}

namespace {

EventLabel rename_event(const EventLabel& e, const SignatureMorphism& s) {
  EventLabel o = e;
  o.message = ren(s.msgMap, e.message);
  return o;
}

}  // namespace

TransitionSystem rename_ts(const TransitionSystem& ts,
                           const SignatureMorphism& s,
                           const ClassModel& before) {
  TransitionSystem out = ts;
  for (auto& st : out.states) {
    st.snapshot = rename_snapshot(st.snapshot, s, before);
    for (auto& [id, rt] : st.runtime)
      for (auto& e : rt.queue) e = rename_event(e, s);
    for (auto& e : st.envInbox) e = rename_event(e, s);
  }
  for (auto& tr : out.transitions) tr.label = rename_event(tr.label, s);
  return out;
}

StateMachine rename_machine(const StateMachine& sm, const SignatureMorphism& s) {
  StateMachine out = sm;
  out.contextClass = ren(s.classMap, sm.contextClass);
  auto attrRen = [&](const std::string& a) {
    auto it = s.attrMap.find({sm.contextClass, a});
    return it == s.attrMap.end() ? a : it->second;
  };
  for (auto& t : out.transitions) {
    t.trigger = ren(s.msgMap, t.trigger);
    t.guard = rename_expr(t.guard, attrRen);
    for (auto& e : t.effects) {
      if (e.kind == Effect::Kind::Assign) {
        e.attr = attrRen(e.attr);
        e.value = rename_expr(e.value, attrRen);
      } else {
        e.message = ren(s.msgMap, e.message);
        for (auto& a : e.args) a = rename_expr(a, attrRen);
      }
    }
  }
  return out;
}

Component rename_component(const Component& c, const SignatureMorphism& s) {
  Component out = c;
  for (auto& p : out.parts) {
    p.name = ren(s.partMap, p.name);
    p.cls = ren(s.classMap, p.cls);
  }
  for (auto& cn : out.connectors) {
    cn.a = ren(s.partMap, cn.a);
    cn.b = ren(s.partMap, cn.b);
    for (auto& m : cn.messages) m = ren(s.msgMap, m);
  }
  for (auto& g : out.gates) {
    g.part = ren(s.partMap, g.part);
    for (auto& m : g.messages) m = ren(s.msgMap, m);
  }
  return out;
}

namespace {

TermPtr rename_term(const TermPtr& t, const SignatureMorphism& s) {
  if (!t) return t;
  auto n = std::make_shared<InteractionTerm>(*t);
  n->msg.message = ren(s.msgMap, t->msg.message);
  n->msg.from = ren(s.partMap, t->msg.from);
  n->msg.to = ren(s.partMap, t->msg.to);
  for (auto& c : n->children) c = rename_term(c, s);
  return n;
}

}  // namespace

InteractionModel rename_interaction(const InteractionModel& sd,
                                    const SignatureMorphism& s) {
  InteractionModel out = sd;
  for (auto& l : out.lifelines) {
    l.name = ren(s.partMap, l.name);  // lifelines rename with parts
    l.cls = ren(s.classMap, l.cls);
  }
  out.root = rename_term(sd.root, s);
  return out;
}

Theory translate_theory(const Theory& t, const SignatureMorphism& s) {
  Theory out = t;
  out.data = rename_class_model(t.data, s);
  for (auto& m : out.machines) m = rename_machine(m, s);
  out.component = rename_component(t.component, s);
  if (t.interaction)
    out.interaction =
        std::make_shared<InteractionModel>(rename_interaction(*t.interaction, s));
  for (auto& od : out.anchors) od.snapshot = rename_snapshot(od.snapshot, s, t.data);
  return out;
}

Sentence translate_sentence(const Sentence& phi, const SignatureMorphism& s) {
  Sentence out = phi;
  if (phi.ctx)
    out.ctx = std::make_shared<ClassModel>(rename_class_model(*phi.ctx, s));
  switch (phi.kind) {
    case Sentence::Kind::Data:
      if (phi.data.kind == CdSentence::Kind::Invariant) {
        out.data.inv.cls = ren(s.classMap, phi.data.inv.cls);
        out.data.inv.expr =
            rename_expr(phi.data.inv.expr, [&](const std::string& a) {
              return ren_attr(s, *phi.ctx, phi.data.inv.cls, a);
            });
      } else {
        out.data.mult.assoc = ren(s.assocMap, phi.data.mult.assoc);
      }
      break;
    case Sentence::Kind::Machine:
      out.machine =
          std::make_shared<StateMachine>(rename_machine(*phi.machine, s));
      break;
    case Sentence::Kind::Interaction:
      out.interaction = std::make_shared<InteractionModel>(
          rename_interaction(*phi.interaction, s));
      break;
    case Sentence::Kind::Anchor:
      out.anchor.snapshot = rename_snapshot(phi.anchor.snapshot, s, *phi.ctx);
      break;
  }
  return out;
}

Realization reduct(const Realization& r, const SignatureMorphism& s,
                   const ClassModel& targetModel) {
  SignatureMorphism inv = inverse(s);
  Realization out;
  out.institution = r.institution;
  if (r.ts)
    out.ts = std::make_shared<TransitionSystem>(
        rename_ts(*r.ts, inv, targetModel));
  out.traces = r.traces;
  for (auto& t : out.traces.traces)
    for (auto& e : t) e.message = ren(inv.msgMap, e.message);
  if (r.traces.source)
    out.traces.source = std::make_shared<TransitionSystem>(
        rename_ts(*r.traces.source, inv, targetModel));
  return out;
}

bool check_satisfaction_condition(const Realization& r, const Sentence& phi,
                                  const SignatureMorphism& s,
                                  const ClassModel& targetModel,
                                  const Bounds& b) {
  bool lhs = satisfies(reduct(r, s, targetModel), phi, b);
  bool rhs = satisfies(r, translate_sentence(phi, s), b);
  return lhs == rhs;
}

// ---- theory combination -----------------------------------------------------

namespace {

bool same_class(const ClassDef& a, const ClassDef& b) {
  if (a.name != b.name || a.parent != b.parent) return false;
  if (a.attrs.size() != b.attrs.size()) return false;
  for (size_t i = 0; i < a.attrs.size(); ++i)
    if (a.attrs[i].name != b.attrs[i].name ||
        !(a.attrs[i].type == b.attrs[i].type))
      return false;
  if (a.receptions.size() != b.receptions.size()) return false;
  for (size_t i = 0; i < a.receptions.size(); ++i) {
    const auto& ra = a.receptions[i];
    const auto& rb = b.receptions[i];
    if (ra.name != rb.name || ra.params.size() != rb.params.size()) return false;
    for (size_t j = 0; j < ra.params.size(); ++j)
      if (!(ra.params[j].type == rb.params[j].type)) return false;
  }
  return true;
}

Mult intersect_mult(const Mult& a, const Mult& b) {
  Mult out;
  out.lo = std::max(a.lo, b.lo);
  if (a.unbounded())
    out.hi = b.hi;
  else if (b.unbounded())
    out.hi = a.hi;
  else
    out.hi = std::min(a.hi, b.hi);
  return out;
}

std::string machine_text(const StateMachine& m) {
  std::string out = m.name + " for " + m.contextClass + " init " + m.initial;
  for (const auto& t : m.transitions) out += "; " + t.str();
  return out;
}

}  // namespace

Theory merge_theories(const Theory& a, const Theory& b, Diagnostics& diags) {
  Theory t = a;
  if (a.institution != b.institution) {
    diags.error(0, 0,
                "cannot combine a " + institution_name(a.institution) +
                    " theory with a " + institution_name(b.institution) +
                    " theory");
    return t;
  }
  if (t.data.name.empty()) t.data.name = b.data.name;
  for (const auto& c : b.data.classes) {
    const ClassDef* ex = t.data.find_class(c.name);
    if (!ex) {
      t.data.classes.push_back(c);
    } else if (!same_class(*ex, c)) {
      diags.error(0, 0,
                  "conflicting declarations of class '" + c.name + "'");
    }
  }
  for (const auto& x : b.data.assocs) {
    AssocDef* ex = nullptr;
    for (auto& y : t.data.assocs)
      if (y.name == x.name) ex = &y;
    if (!ex) {
      t.data.assocs.push_back(x);
      continue;
    }
    if (ex->a.cls != x.a.cls || ex->b.cls != x.b.cls ||
        ex->a.role != x.a.role || ex->b.role != x.b.role) {
      diags.error(0, 0,
                  "conflicting declarations of association '" + x.name + "'");
      continue;
    }
    ex->a.mult = intersect_mult(ex->a.mult, x.a.mult);
    ex->b.mult = intersect_mult(ex->b.mult, x.b.mult);
  }
  for (const auto& i : b.data.invariants) {
    bool dup = false;
    for (const auto& j : t.data.invariants)
      dup = dup || (j.cls == i.cls && j.expr->str() == i.expr->str());
    if (!dup) t.data.invariants.push_back(i);
  }
  t.dataSentences = a.dataSentences || b.dataSentences;

  for (const auto& m : b.machines) {
    const StateMachine* ex = t.find_machine(m.name);
    if (!ex) {
      t.machines.push_back(m);
    } else if (machine_text(*ex) != machine_text(m)) {
      diags.error(0, 0,
                  "conflicting declarations of machine '" + m.name + "'");
    }
  }

  if (t.component.empty()) {
    t.component = b.component;
  } else if (!b.component.empty()) {
    Component& c = t.component;
    c.name = c.name + "+" + b.component.name;
    for (const auto& p : b.component.parts) {
      const PartDef* ex = c.find_part(p.name);
      if (!ex) {
        c.parts.push_back(p);
      } else if (ex->cls != p.cls || ex->machine != p.machine) {
        diags.error(0, 0,
                    "conflicting declarations of part '" + p.name + "'");
      }
    }
    c.connectors.insert(c.connectors.end(), b.component.connectors.begin(),
                        b.component.connectors.end());
    c.gates.insert(c.gates.end(), b.component.gates.begin(),
                   b.component.gates.end());
    c.implicitGates = c.implicitGates && b.component.implicitGates;
  }

  if (!t.interaction) {
    t.interaction = b.interaction;
    t.sdExists = b.sdExists;
  } else if (b.interaction && b.interaction->name != t.interaction->name) {
    diags.error(0, 0,
                "cannot combine two interactions ('" + t.interaction->name +
                    "' and '" + b.interaction->name + "')");
  }

  for (const auto& od : b.anchors) {
    bool dup = false;
    for (const auto& ex : t.anchors) dup = dup || ex.name == od.name;
    if (!dup) t.anchors.push_back(od);
  }

  t.hiddenSource.reset();
  t.hideMorph.clear();
  return t;
}

void validate_theory(const Theory& t, Diagnostics& diags) {
  if (t.data.empty()) return;  // nothing to type against yet
  for (const auto& m : t.machines) wellformed_stm(m, t.data, diags);
  if (!t.component.empty()) {
    std::map<std::string, const StateMachine*> byName;
    for (const auto& m : t.machines) byName[m.name] = &m;
    wellformed_cmp(t.component, t.data, byName, diags);
  }
  if (t.interaction) {
    for (const auto& l : t.interaction->lifelines) {
      if (!t.data.find_class(l.cls))
        diags.error(l.line, 0,
                    "lifeline '" + l.name + "' has unknown class " + l.cls);
    }
  }
}

}  // namespace mvcheck
