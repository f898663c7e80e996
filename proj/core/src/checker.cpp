#include "mvcheck/checker.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "mvcheck/automaton.hpp"
#include "mvcheck/exec.hpp"
#include "mvcheck/morphisms.hpp"
#include "mvcheck/snapshot.hpp"

namespace mvcheck {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Incremental:
      return "incremental";
    case Strategy::Monolithic:
      return "monolithic";
    case Strategy::Decentralized:
      return "decentralized";
  }
  return "incremental";
}

std::optional<Strategy> strategy_from(const std::string& name) {
  if (name == "incremental") return Strategy::Incremental;
  if (name == "monolithic") return Strategy::Monolithic;
  if (name == "decentralized") return Strategy::Decentralized;
  return std::nullopt;
}

namespace {

// CD realizations are plain data, STM adds machine runtime, CMP adds the
// composite discipline. A union of views lives in the richest institution.
int behaviour_rank(InstitutionId i) {
  switch (i) {
    case InstitutionId::CD:
      return 0;
    case InstitutionId::STM:
      return 1;
    case InstitutionId::CMP:
      return 2;
    case InstitutionId::SD:
      return -1;
  }
  return -1;
}

// Interaction views and projected (hidden) views constrain the joint
// behaviour from outside; everything else contributes to it.
bool in_union(const Theory& t) {
  return t.institution != InstitutionId::SD && !t.hiddenSource;
}

std::string scope_of(const Theory& t) {
  if (t.institution == InstitutionId::CD && t.machines.empty())
    return "structural";
  return "behavioural";
}

// ---- preparation ------------------------------------------------------------

struct Prepared {
  Theory unionTheory;  // merged contributing views, tag-promoted
  Snapshot anchor;     // merged rigid anchor of all union anchors
  bool anchorOk = true;
  std::string anchorWhy;
  bool freeBehaviour = false;  // no machines and no parts anywhere
};

Prepared prepare(const ResolvedNetwork& n, Diagnostics& diags) {
  Prepared p;
  bool first = true;
  for (const auto& node : n.nodes) {
    if (!in_union(node.theory)) continue;
    Theory lifted = node.theory;
    if (first) {
      p.unionTheory = std::move(lifted);
      first = false;
      continue;
    }
    InstitutionId hi =
        behaviour_rank(lifted.institution) >
                behaviour_rank(p.unionTheory.institution)
            ? lifted.institution
            : p.unionTheory.institution;
    p.unionTheory.institution = hi;
    lifted.institution = hi;
    p.unionTheory = merge_theories(p.unionTheory, lifted, diags);
  }
  if (first) p.unionTheory.institution = InstitutionId::CD;
  validate_theory(p.unionTheory, diags);

  for (const auto& od : p.unionTheory.anchors) {
    for (const auto& [id, st] : od.snapshot.objects) {
      auto it = p.anchor.objects.find(id);
      if (it == p.anchor.objects.end()) {
        p.anchor.objects[id] = st;
        continue;
      }
      if (it->second.cls != st.cls) {
        p.anchorOk = false;
        p.anchorWhy = "anchored object '" + id +
                      "' is declared with two classes: " + it->second.cls +
                      " and " + st.cls;
        return p;
      }
      for (const auto& [a, v] : st.attrs) {
        auto ait = it->second.attrs.find(a);
        if (ait == it->second.attrs.end()) {
          it->second.attrs[a] = v;
        } else if (!(ait->second == v)) {
          p.anchorOk = false;
          p.anchorWhy = "anchored object '" + id + "' carries two values for " +
                        a + ": " + value_str(ait->second) + " and " +
                        value_str(v);
          return p;
        }
      }
    }
    for (const auto& [assoc, ls] : od.snapshot.links)
      for (const auto& l : ls) p.anchor.links[assoc].insert(l);
  }

  p.freeBehaviour =
      p.unionTheory.machines.empty() && p.unionTheory.component.parts.empty();
  return p;
}

// ---- joint behaviour --------------------------------------------------------

struct Family {
  std::shared_ptr<TransitionSystem> ts;
  GenStats stats;
  bool ok = true;
  std::string why;
};

Family build_family(const Theory& u, const Snapshot& s0, const Bounds& b) {
  Family f;
  std::optional<ExecModel> em;
  std::string why;
  if (!u.component.parts.empty()) {
    em = exec_for_component(u.data, u.component, u.machines, s0, &why);
  } else if (!u.machines.empty()) {
    em = exec_for_machines(u.data, u.machines, s0, &why);
  } else {
    // Data-only union: the one-state system carrying the snapshot.
    TransitionSystem ts;
    TsState st;
    st.snapshot = s0;
    ts.states.push_back(std::move(st));
    ts.initial.push_back(0);
    f.ts = std::make_shared<TransitionSystem>(std::move(ts));
    return f;
  }
  if (!em) {
    f.ok = false;
    f.why = why.empty() ? "no execution model binds this snapshot" : why;
    return f;
  }
  f.ts = std::make_shared<TransitionSystem>(generate_ts(*em, s0, b, &f.stats));
  return f;
}

// The signature window a theory sees of the joint behaviour. Runtime is
// kept exactly for the classes the theory's machines (or machine-bearing
// parts) govern.
SignatureFilter filter_of(const Theory& t) {
  SignatureFilter f;
  for (const auto& c : t.data.classes) {
    f.classes.insert(c.name);
    for (const auto& a : t.data.all_attrs(c.name))
      f.attrs.insert({c.name, a.name});
    for (const auto& r : t.data.all_receptions(c.name))
      f.messages.insert(r.name);
  }
  for (const auto& a : t.data.assocs) f.assocs.insert(a.name);
  for (const auto& m : t.machines) f.keepRuntime.insert(m.contextClass);
  for (const auto& pt : t.component.parts)
    if (!pt.machine.empty()) f.keepRuntime.insert(pt.cls);
  return f;
}

Realization derive_theory(const Theory& t, const Family& fam, const Bounds& b,
                          const MorphismRegistry& reg) {
  if (t.hiddenSource) {
    Realization base = derive_theory(*t.hiddenSource, fam, b, reg);
    auto it = reg.morphisms.find(t.hideMorph);
    if (it == reg.morphisms.end()) return base;  // resolver validated this
    return it->second.translate(base, b);
  }
  Realization r;
  r.institution = t.institution;
  if (t.institution == InstitutionId::SD) {
    r.traces.source = fam.ts;
    r.traces.depth = b.depth;
    return r;
  }
  r.ts = std::make_shared<TransitionSystem>(ts_reduct(*fam.ts, filter_of(t)));
  return r;
}

// Data-level projection used for pairwise compatibility: two views with one
// signature must agree on the structural content of the joint behaviour
// (machine runtime is view-local and excluded).
std::string compat_digest(const Theory& t, const Family& fam, const Bounds& b,
                          const MorphismRegistry& reg) {
  if (t.hiddenSource || t.institution == InstitutionId::SD) {
    Realization r = derive_theory(t, fam, b, reg);
    if (r.ts) return hex_digest(r.ts->digest());
    std::string text = "traces@" + std::to_string(r.traces.depth);
    if (r.traces.symbolic()) text += "\n" + r.traces.source->canonical_text();
    return hex_digest(fnv1a64(text));
  }
  SignatureFilter f = filter_of(t);
  f.keepRuntime.clear();
  return hex_digest(ts_reduct(*fam.ts, f).digest());
}

std::string realization_digest(const Realization& r) {
  if (r.ts) return hex_digest(r.ts->digest());
  std::string text = "traces@" + std::to_string(r.traces.depth);
  if (r.traces.symbolic()) {
    text += "\n" + r.traces.source->canonical_text();
  } else {
    std::vector<std::string> lines;
    for (const auto& t : r.traces.traces) lines.push_back(trace_str(t));
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) text += "\n" + l;
  }
  return hex_digest(fnv1a64(text));
}

// ---- free interaction realizability ------------------------------------

// When the network binds no behaviour at all (no machines, no parts), an
// interaction is consistent iff some typable event sequence threads it from
// start to accept: that sequence on its own is a realization. Events are
// synthesized from the patterns; an edge whose argument cannot be given a
// value is skipped (and remembered, since skipping weakens a failure).
struct FreeSearch {
  const InteractionModel* sd = nullptr;
  std::map<std::string, Type> varTypes;
  std::map<std::string, std::vector<std::optional<Type>>> sig;
  bool skipped = false;
};

std::optional<EventLabel> synthesize(FreeSearch& fs, const EventPattern& pat,
                                     BindEnv& env) {
  EventLabel e;
  e.sender = pat.from;
  e.receiver = pat.to;
  e.message = pat.message;
  for (size_t i = 0; i < pat.args.size(); ++i) {
    const ArgPattern& a = pat.args[i];
    if (a.kind == ArgPattern::Kind::Literal) {
      e.args.push_back(a.literal);
      continue;
    }
    if (a.kind == ArgPattern::Kind::Variable) {
      auto it = env.find(a.var);
      if (it != env.end()) {
        e.args.push_back(it->second);
        continue;
      }
      std::optional<Type> ty = a.declaredType;
      if (!ty) {
        auto vt = fs.varTypes.find(a.var);
        if (vt != fs.varTypes.end()) ty = vt->second;
      }
      if (!ty) {
        fs.skipped = true;
        return std::nullopt;
      }
      auto vals = type_values(*ty);
      if (vals.empty()) {
        fs.skipped = true;
        return std::nullopt;
      }
      env[a.var] = vals.front();
      e.args.push_back(vals.front());
      continue;
    }
    // Wildcard: any value of the slot's type will do.
    auto sit = fs.sig.find(pat.message);
    std::optional<Type> ty;
    if (sit != fs.sig.end() && i < sit->second.size()) ty = sit->second[i];
    if (!ty) {
      fs.skipped = true;
      return std::nullopt;
    }
    auto vals = type_values(*ty);
    if (vals.empty()) {
      fs.skipped = true;
      return std::nullopt;
    }
    e.args.push_back(vals.front());
  }
  return e;
}

bool free_sd_check(const InteractionModel& sd, Trace* witness, bool* skipped) {
  FreeSearch fs;
  fs.sd = &sd;
  Diagnostics scratch;
  fs.varTypes = sd_var_types(sd, &scratch);
  fs.sig = sd_message_sig(sd);
  TraceAutomaton a = sd_to_nfa(sd);

  struct Node {
    NfaConfig cfg;
    int parent = -1;
    EventLabel via;
    bool hasVia = false;
  };
  std::vector<Node> nodes;
  std::set<NfaConfig> seen;
  std::vector<int> frontier;
  auto push = [&](NfaConfig cfg, int parent, const EventLabel* via) {
    if (!seen.insert(cfg).second) return;
    Node nd;
    nd.cfg = std::move(cfg);
    nd.parent = parent;
    if (via) {
      nd.via = *via;
      nd.hasVia = true;
    }
    nodes.push_back(std::move(nd));
    frontier.push_back((int)nodes.size() - 1);
  };
  push(NfaConfig{a.initial, {}}, -1, nullptr);
  for (size_t qi = 0; qi < frontier.size(); ++qi) {
    int ni = frontier[qi];
    NfaConfig cfg = nodes[(size_t)ni].cfg;
    if (cfg.state == a.accepting) {
      if (witness) {
        Trace t;
        for (int k = ni; k >= 0; k = nodes[(size_t)k].parent)
          if (nodes[(size_t)k].hasVia) t.push_back(nodes[(size_t)k].via);
        std::reverse(t.begin(), t.end());
        *witness = t;
      }
      if (skipped) *skipped = fs.skipped;
      return true;
    }
    for (int ei : a.out[(size_t)cfg.state]) {
      const NfaEdge& ed = a.edges[(size_t)ei];
      if (ed.eps) {
        push(NfaConfig{ed.to, cfg.env}, ni, nullptr);
        continue;
      }
      BindEnv env = cfg.env;
      auto ev = synthesize(fs, ed.pat, env);
      if (!ev) continue;
      // Endpoints are the lifeline names themselves: the free realization
      // populates one object per lifeline.
      push(NfaConfig{ed.to, std::move(env)}, ni, &*ev);
    }
  }
  if (skipped) *skipped = fs.skipped;
  return false;
}

// ---- per-snapshot run ---------------------------------------------------

struct ViewOutcome {
  const ResolvedNode* node = nullptr;
  bool ok = true;
  bool exact = true;
  int sentences = 0;
  std::string why;
  Trace witness;
  bool hasWitness = false;
};

struct LinkOutcome {
  const ResolvedLink* link = nullptr;
  bool ok = true;
  bool exact = true;
  int sentences = 0;
  std::string why;
};

struct SnapRun {
  Snapshot init;
  bool familyOk = true;
  std::string familyWhy;
  std::shared_ptr<TransitionSystem> ts;
  GenStats stats;
  long long productStates = 0;
  bool ok = true;
  bool exact = true;
  std::vector<ViewOutcome> views;
  std::vector<LinkOutcome> links;
  Trace witnessTrace;
  bool hasWitnessTrace = false;
  std::string capNote;
};

// Checks all sentences of one theory against one realization. An exact
// failure settles the view; inexact failures keep scanning, since a later
// exact one would strengthen the verdict.
void check_sentences(const Theory& t, const Realization& r, const Bounds& b,
                     bool freeMode, ViewOutcome& out, long long* product) {
  auto sents = t.sentences();
  out.sentences = (int)sents.size();
  for (const auto& s : sents) {
    bool exact = true;
    std::string why;
    Trace w;
    bool ok;
    if (s.kind == Sentence::Kind::Interaction && freeMode && !t.hiddenSource) {
      bool skipped = false;
      ok = free_sd_check(*s.interaction, &w, &skipped);
      exact = ok || !skipped;
      if (!ok)
        why = "no typable event sequence realizes " + s.interaction->name;
    } else {
      long long ps = 0;
      ok = satisfies(r, s, b, &exact, &why, &w, &ps);
      if (product) *product += ps;
    }
    if (ok && s.kind == Sentence::Kind::Interaction && s.existsMode &&
        !out.hasWitness) {
      out.witness = w;
      out.hasWitness = true;
    }
    if (!ok) {
      if (out.ok || (exact && !out.exact)) {
        out.why = s.str() + ": " + why;
        out.exact = exact;
      }
      out.ok = false;
      if (exact) return;  // one exact refutation settles the view
    } else {
      if (out.ok) out.exact = out.exact && exact;
    }
  }
}

SnapRun run_snapshot(const Prepared& p, const ResolvedNetwork& n,
                     const Snapshot& s0, const CheckOptions& o,
                     const MorphismRegistry& reg, bool detailed) {
  SnapRun r;
  r.init = s0;
  const bool mono = o.strategy == Strategy::Monolithic;

  // Stage one (incremental): data sentences on the reduced snapshot, before
  // any behaviour is built. A violation here rejects the snapshot outright.
  if (!mono) {
    for (const auto& node : n.nodes) {
      const Theory& t = node.theory;
      if (!in_union(t)) continue;
      Snapshot rs = snapshot_reduct(s0, filter_of(t));
      std::string bad;
      if (t.dataSentences) {
        for (const auto& cs : cd_sentences(t.data))
          if (!holds_sentence(rs, t.data, cs)) {
            bad = "snapshot violates " + cs.str();
            break;
          }
      }
      if (bad.empty()) {
        for (const auto& od : t.anchors)
          if (!embeds(rs, od.snapshot)) {
            bad = "snapshot does not embed " + od.name;
            break;
          }
      }
      if (!bad.empty()) {
        ViewOutcome vo;
        vo.node = &node;
        vo.ok = false;
        vo.exact = true;
        vo.why = bad;
        r.views.push_back(std::move(vo));
        r.ok = false;
        r.exact = true;
        return r;
      }
    }
  }

  // Stage two: the joint behaviour of the union theory.
  Family fam = build_family(p.unionTheory, s0, o.bounds);
  r.stats = fam.stats;
  if (!fam.ok) {
    r.familyOk = false;
    r.familyWhy = fam.why;
    r.ok = false;
    r.exact = true;
    return r;
  }
  r.ts = fam.ts;
  if (!fam.ts->exploredCompletely) r.capNote = fam.ts->boundNote;

  Realization system;
  system.institution = p.unionTheory.institution;
  system.ts = fam.ts;

  // Free-interaction bookkeeping: several interactions in all-mode cannot
  // share one freely chosen realization without a joint construction.
  int freeSdViews = 0;
  bool freeAllMode = false;
  if (p.freeBehaviour)
    for (const auto& node : n.nodes)
      if (node.theory.institution == InstitutionId::SD &&
          !node.theory.hiddenSource && node.theory.interaction) {
        ++freeSdViews;
        freeAllMode = freeAllMode || !node.theory.sdExists;
      }

  bool anyExactFail = false, anyInexactFail = false, allPassExact = true;

  // Stage three: every view against its own realization (monolithic:
  // contributing views against the joint behaviour directly).
  for (const auto& node : n.nodes) {
    ViewOutcome vo;
    vo.node = &node;
    const Theory& t = node.theory;
    Realization rv;
    if (mono && in_union(t))
      rv = system;
    else
      rv = derive_theory(t, fam, o.bounds, reg);
    check_sentences(t, rv, o.bounds, p.freeBehaviour, vo, &r.productStates);
    if (vo.ok && p.freeBehaviour && freeSdViews > 1 && freeAllMode &&
        t.institution == InstitutionId::SD && !t.hiddenSource &&
        t.interaction && !t.sdExists) {
      vo.exact = false;
      vo.why = "joint free realization of several interactions not constructed";
    }
    if (!vo.ok) {
      (vo.exact ? anyExactFail : anyInexactFail) = true;
    } else {
      allPassExact = allPassExact && vo.exact;
      if (vo.hasWitness && !r.hasWitnessTrace) {
        r.witnessTrace = vo.witness;
        r.hasWitnessTrace = true;
      }
    }
    r.views.push_back(std::move(vo));
    if (anyExactFail && !detailed) break;
  }

  // Stage four: refinement links -- the abstract sentences must hold over
  // the realization derived for the concrete side.
  if (!anyExactFail || detailed) {
    for (const auto& link : n.links) {
      LinkOutcome lo;
      lo.link = &link;
      Realization rc = derive_theory(link.concreteTheory, fam, o.bounds, reg);
      ViewOutcome tmp;
      check_sentences(link.abstractTheory, rc, o.bounds, p.freeBehaviour, tmp,
                      &r.productStates);
      lo.ok = tmp.ok;
      lo.exact = tmp.exact;
      lo.sentences = tmp.sentences;
      lo.why = tmp.why;
      if (!lo.ok) {
        (lo.exact ? anyExactFail : anyInexactFail) = true;
      } else {
        allPassExact = allPassExact && lo.exact;
      }
      r.links.push_back(std::move(lo));
      if (anyExactFail && !detailed) break;
    }
  }

  r.ok = !anyExactFail && !anyInexactFail;
  r.exact = r.ok ? allPassExact : anyExactFail;
  return r;
}

// ---- report assembly ----------------------------------------------------

void fill_rows(ConsistencyReport& rep, const ResolvedNetwork& n,
               const SnapRun& run) {
  std::map<const ResolvedNode*, const ViewOutcome*> byNode;
  for (const auto& vo : run.views) byNode[vo.node] = &vo;
  for (const auto& node : n.nodes) {
    ModelReport mr;
    mr.name = node.name;
    mr.institution = institution_name(node.theory.institution);
    mr.scope = scope_of(node.theory);
    auto it = byNode.find(&node);
    if (it == byNode.end()) {
      mr.sentences = (int)node.theory.sentences().size();
      mr.status = "skipped";
      mr.detail = run.familyOk ? "not reached" : run.familyWhy;
    } else {
      const ViewOutcome& vo = *it->second;
      mr.sentences = vo.sentences;
      mr.status = vo.ok ? (vo.exact ? "satisfied" : "satisfied (capped)")
                        : (vo.exact ? "violated" : "violated (capped)");
      mr.detail = vo.why;
    }
    rep.models.push_back(std::move(mr));
  }
  std::map<const ResolvedLink*, const LinkOutcome*> byLink;
  for (const auto& lo : run.links) byLink[lo.link] = &lo;
  for (const auto& link : n.links) {
    LinkReportRow lr;
    lr.name = link.name;
    auto it = byLink.find(&link);
    if (it == byLink.end()) {
      lr.status = "skipped";
      lr.detail = run.familyOk ? "not reached" : run.familyWhy;
    } else {
      const LinkOutcome& lo = *it->second;
      lr.status = lo.ok ? (lo.exact ? "refines" : "refines (capped)")
                        : (lo.exact ? "violated" : "violated (capped)");
      lr.detail = lo.ok ? std::to_string(lo.sentences) +
                              " abstract sentences hold over the derived "
                              "concrete realization"
                        : lo.why;
    }
    rep.links.push_back(std::move(lr));
  }
}

void fill_skipped_rows(ConsistencyReport& rep, const ResolvedNetwork& n,
                       const std::string& why) {
  for (const auto& node : n.nodes) {
    ModelReport mr;
    mr.name = node.name;
    mr.institution = institution_name(node.theory.institution);
    mr.scope = scope_of(node.theory);
    mr.sentences = (int)node.theory.sentences().size();
    mr.status = "skipped";
    mr.detail = why;
    rep.models.push_back(std::move(mr));
  }
  for (const auto& link : n.links) {
    LinkReportRow lr;
    lr.name = link.name;
    lr.status = "skipped";
    lr.detail = why;
    rep.links.push_back(std::move(lr));
  }
}

WitnessBundle make_bundle(const ResolvedNetwork& n, const SnapRun& run,
                          const CheckOptions& o, const MorphismRegistry& reg) {
  WitnessBundle b;
  b.network = n.name;
  b.bounds = o.bounds;
  b.trace = run.witnessTrace;
  b.systemTs = *run.ts;
  b.digests["system"] = hex_digest(run.ts->digest());
  Family fam;
  fam.ts = run.ts;
  for (const auto& node : n.nodes)
    b.digests["node:" + node.name] =
        realization_digest(derive_theory(node.theory, fam, o.bounds, reg));
  for (const auto& link : n.links)
    b.digests["link:" + link.name] = realization_digest(
        derive_theory(link.concreteTheory, fam, o.bounds, reg));
  return b;
}

// Can the recorded trace be replayed as the observable part of a path?
bool trace_realizable(const TransitionSystem& ts, const Trace& t) {
  auto edges = ts.out_edges();
  std::set<std::pair<int, size_t>> seen;
  std::vector<std::pair<int, size_t>> work;
  for (int i : ts.initial) work.push_back({i, 0});
  while (!work.empty()) {
    auto [s, k] = work.back();
    work.pop_back();
    if (!seen.insert({s, k}).second) continue;
    if (k == t.size()) return true;
    for (int ei : edges[(size_t)s]) {
      const auto& tr = ts.transitions[(size_t)ei];
      if (!tr.observable)
        work.push_back({tr.to, k});
      else if (tr.label == t[k])
        work.push_back({tr.to, k + 1});
    }
  }
  return false;
}

CheckResult check_network_core(const ResolvedNetwork& n, const CheckOptions& o,
                               Diagnostics& diags) {
  CheckResult res;
  ConsistencyReport& rep = res.report;
  rep.network = n.name;
  rep.strategy = strategy_name(o.strategy);
  rep.bounds = o.bounds;

  const MorphismRegistry& reg = MorphismRegistry::builtin();

  size_t before = diags.items.size();
  Prepared p = prepare(n, diags);
  bool prepFailed = false;
  for (size_t i = before; i < diags.items.size(); ++i)
    prepFailed = prepFailed || diags.items[i].severity == Severity::Error;
  if (prepFailed) {
    rep.verdict = VerdictKind::Unknown;
    rep.detail = "the network's views do not merge; see diagnostics";
    fill_skipped_rows(rep, n, "union theory ill-formed");
    return res;
  }
  if (!p.anchorOk) {
    rep.verdict = VerdictKind::Inconsistent;
    rep.detail = p.anchorWhy;
    fill_skipped_rows(rep, n, "anchors conflict");
    return res;
  }

  auto snaps = enumerate_snapshots(p.unionTheory.data, o.bounds, p.anchor);
  rep.stats.snapshotsAnchored = (long long)snaps.size();
  if (snaps.empty()) {
    rep.verdict = VerdictKind::Inconsistent;
    rep.detail =
        "no conformant initial configuration embeds the anchors within "
        "bounds";
    fill_skipped_rows(rep, n, "no anchored snapshot");
    return res;
  }

  bool sawCapped = false;
  std::string capNote;
  std::optional<SnapRun> firstProblem;
  for (const auto& s0 : snaps) {
    bool detailed = !firstProblem.has_value();
    SnapRun run = run_snapshot(p, n, s0, o, reg, detailed);
    rep.stats.snapshotsTried++;
    rep.stats.statesExplored += run.stats.statesExplored;
    rep.stats.transitionsAdded += run.stats.transitionsAdded;
    rep.stats.overflowPruned += run.stats.overflowPruned;
    rep.stats.discards += run.stats.discards;
    rep.stats.productStates += run.productStates;
    if (run.ok && run.exact) {
      rep.verdict = VerdictKind::Consistent;
      rep.detail = "a joint realization satisfies every view" +
                   std::string(n.links.empty() ? "" : " and every refinement");
      fill_rows(rep, n, run);
      std::istringstream snap(snapshot_text(run.init));
      for (std::string line; std::getline(snap, line);)
        rep.witnessInit.push_back(line);
      for (const auto& e : run.witnessTrace)
        rep.witnessTrace.push_back(e.str());
      if (o.wantWitness && run.ts)
        res.witness = make_bundle(n, run, o, reg);
      return res;
    }
    if (!run.exact) {
      sawCapped = true;
      if (capNote.empty())
        capNote = !run.capNote.empty() ? run.capNote : "interaction product";
    }
    if (!firstProblem) firstProblem = std::move(run);
  }

  if (sawCapped) {
    rep.verdict = VerdictKind::Unknown;
    rep.detail = "exploration was cut before a definitive answer (" + capNote +
                 "); raise --max-states or lower the other bounds";
  } else {
    rep.verdict = VerdictKind::Inconsistent;
    rep.detail =
        "every anchored configuration fails some view by an exact argument";
  }
  if (firstProblem) {
    fill_rows(rep, n, *firstProblem);
    std::istringstream snap(snapshot_text(firstProblem->init));
    for (std::string line; std::getline(snap, line);)
      rep.witnessInit.push_back(line);
  }
  return res;
}

}  // namespace

CheckResult check_network(const ResolvedNetwork& n, const CheckOptions& o,
                          Diagnostics& diags) {
  if (o.strategy != Strategy::Decentralized)
    return check_network_core(n, o, diags);

  // Decentralized: find a candidate with the incremental pipeline, then
  // re-establish it from scratch and cross-check every digest.
  CheckOptions inner = o;
  inner.strategy = Strategy::Incremental;
  inner.wantWitness = true;
  CheckResult res = check_network_core(n, inner, diags);
  res.report.strategy = strategy_name(Strategy::Decentralized);
  if (res.report.verdict != VerdictKind::Consistent) return res;
  std::string why;
  if (!res.witness || !verify_witness(n, *res.witness, diags, &why)) {
    res.report.verdict = VerdictKind::Unknown;
    res.report.detail =
        "the witness failed independent re-verification: " + why;
  } else {
    res.report.detail += "; the witness re-verified independently";
  }
  if (!o.wantWitness) res.witness.reset();
  return res;
}

CheckResult check_theory(const std::string& name, const Theory& t,
                         const CheckOptions& o, Diagnostics& diags) {
  ResolvedNetwork n;
  n.name = name;
  ResolvedNode node;
  node.name = name;
  node.theory = t;
  n.nodes.push_back(std::move(node));
  return check_network(n, o, diags);
}

bool verify_witness(const ResolvedNetwork& n, const WitnessBundle& b,
                    Diagnostics& diags, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  const MorphismRegistry& reg = MorphismRegistry::builtin();
  size_t before = diags.items.size();
  Prepared p = prepare(n, diags);
  for (size_t i = before; i < diags.items.size(); ++i)
    if (diags.items[i].severity == Severity::Error)
      return fail("the network's views do not merge");
  if (!p.anchorOk) return fail(p.anchorWhy);
  if (b.systemTs.states.empty() || b.systemTs.initial.empty())
    return fail("the bundle carries no system states");

  Snapshot s0 = b.init();
  if (!conforms(s0, p.unionTheory.data))
    return fail("the recorded initial snapshot does not conform to the union "
                "theory");
  if (!embeds(s0, p.anchor))
    return fail("the recorded initial snapshot does not embed the anchors");

  Family fam = build_family(p.unionTheory, s0, b.bounds);
  if (!fam.ok) return fail("the joint behaviour cannot be rebuilt: " + fam.why);
  if (!fam.ts->exploredCompletely)
    return fail("rebuilding the joint behaviour hit a cap: " +
                fam.ts->boundNote);

  std::string sysd = hex_digest(fam.ts->digest());
  auto sit = b.digests.find("system");
  if (sit == b.digests.end()) return fail("the manifest lacks a system digest");
  if (sit->second != sysd)
    return fail("system digest mismatch: rebuilt " + sysd + ", recorded " +
                sit->second);
  if (b.systemTs.canonical_text() != fam.ts->canonical_text())
    return fail("the shipped transition system differs from the rebuilt one");
  if (!trace_realizable(*fam.ts, b.trace))
    return fail("the recorded trace is not realizable in the rebuilt "
                "behaviour");

  std::vector<std::pair<std::string, std::string>> sigs;  // (signature, name)
  std::map<std::string, std::string> compat;
  for (const auto& node : n.nodes) {
    Realization r = derive_theory(node.theory, fam, b.bounds, reg);
    std::string d = realization_digest(r);
    auto it = b.digests.find("node:" + node.name);
    if (it == b.digests.end())
      return fail("the manifest lacks a digest for view '" + node.name + "'");
    if (it->second != d)
      return fail("digest mismatch for view '" + node.name + "': rebuilt " +
                  d + ", recorded " + it->second);
    ViewOutcome vo;
    check_sentences(node.theory, r, b.bounds, p.freeBehaviour, vo, nullptr);
    if (!vo.ok || !vo.exact)
      return fail("view '" + node.name + "' fails re-checking: " +
                  (vo.why.empty() ? "inexact verdict" : vo.why));
    sigs.push_back({node.theory.signature_text(), node.name});
    compat[node.name] = compat_digest(node.theory, fam, b.bounds, reg);
  }
  for (const auto& link : n.links) {
    Realization rc = derive_theory(link.concreteTheory, fam, b.bounds, reg);
    std::string d = realization_digest(rc);
    auto it = b.digests.find("link:" + link.name);
    if (it == b.digests.end())
      return fail("the manifest lacks a digest for refinement '" + link.name +
                  "'");
    if (it->second != d)
      return fail("digest mismatch for refinement '" + link.name + "'");
    ViewOutcome vo;
    check_sentences(link.abstractTheory, rc, b.bounds, p.freeBehaviour, vo,
                    nullptr);
    if (!vo.ok || !vo.exact)
      return fail("refinement '" + link.name + "' fails re-checking: " +
                  (vo.why.empty() ? "inexact verdict" : vo.why));
  }
  // Views sharing a signature must agree on the structural content they see.
  for (size_t i = 0; i < sigs.size(); ++i)
    for (size_t j = i + 1; j < sigs.size(); ++j)
      if (sigs[i].first == sigs[j].first &&
          compat[sigs[i].second] != compat[sigs[j].second])
        return fail("views '" + sigs[i].second + "' and '" + sigs[j].second +
                    "' share a signature but disagree on the joint "
                    "behaviour");
  return true;
}

}  // namespace mvcheck
