// Acceptance checks for the checker as a whole: one pass/fail line each,
// nonzero exit when any fails. Relies on the shipped model corpus.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "mvcheck/automaton.hpp"
#include "mvcheck/checker.hpp"
#include "oracles.hpp"

using namespace mvcheck;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void criterion(int n, const char* label, bool ok, double secs) {
  std::printf("criterion %2d: %s  %-58s (%.2fs)\n", n, ok ? "PASS" : "FAIL",
              label, secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string models_dir() { return MVCHECK_MODELS_DIR; }

Library load_lib(const std::string& dir, const std::string& dolName) {
  Library lib;
  lib.rootDir = dir;
  auto txt = lib.read(dolName);
  if (!txt) {
    std::fprintf(stderr, "cannot read %s in %s\n", dolName.c_str(),
                 dir.c_str());
    std::exit(2);
  }
  Diagnostics d;
  lib.dol = parse_dol(*txt, d);
  if (!d.ok()) {
    std::fprintf(stderr, "%s", d.str().c_str());
    std::exit(2);
  }
  return lib;
}

bool get_network(const Library& lib, const std::string& name,
                 ResolvedNetwork& out) {
  Diagnostics d;
  Resolver res(lib, d);
  auto n = res.network(name);
  if (!n || !d.ok()) {
    std::fprintf(stderr, "resolving %s:\n%s", name.c_str(), d.str().c_str());
    return false;
  }
  out = *n;
  return true;
}

bool check_verdict(const Library& lib, const std::string& name, Strategy st,
                   VerdictKind& verdict, ConsistencyReport* report = nullptr) {
  ResolvedNetwork n;
  if (!get_network(lib, name, n)) return false;
  Diagnostics d;
  CheckOptions o;
  o.strategy = st;
  auto r = check_network(n, o, d);
  verdict = r.report.verdict;
  if (report) *report = r.report;
  return true;
}

// Do the named messages occur in this order (not necessarily adjacent)?
bool messages_in_order(const std::vector<std::string>& lines,
                       const std::vector<std::string>& needles) {
  size_t pos = 0;
  for (const auto& needle : needles) {
    while (pos < lines.size() &&
           lines[pos].find(needle) == std::string::npos)
      ++pos;
    if (pos == lines.size()) return false;
    ++pos;
  }
  return true;
}

// --- criterion 1: the network library parses as printed and resolves ---

void criterion_1(const Library& atm) {
  auto t0 = std::chrono::steady_clock::now();
  std::string text = *atm.read("atm.dol");
  const char* listings[] = {
      "model ATM_Bank_Interaction_cd =\n"
      "  ATM_Bank_Interaction hide along sd2cd\nend\n",

      "refinement r1 =\n"
      "  { User_Interface reveal ATM_Bank_Interaction_cd }\n"
      "  refined to ATM_Bank_Interaction_cd\nend\n",

      "model ATM_stm =\n"
      "  User_Interface with translation cd2stm\nthen\n"
      "  ATM_stm_definition\nend\n",

      "model Bank_stm =\n"
      "  User_Interface with translation cd2stm\nthen\n"
      "  Bank_stm_definition\nend\n",

      "model System =\n"
      "  ATM_stm with translation stm2cmp with cid |-> atm\nand\n"
      "  Bank_stm with translation stm2cmp with cid |-> bank\nthen\n"
      "  cmp\nend\n",

      "refinement r2 =\n"
      "  ATM_Bank_Interaction refined to { System hide along cmp2sd }\nend\n",

      "network N = %consistent\n"
      "  User_Interface, ATM_stm, Bank_stm, System,\n"
      "  ATM_Bank_Interaction, r1, r2\nend\n",
  };
  bool ok = true;
  for (const char* l : listings) ok &= text.find(l) != std::string::npos;

  Diagnostics d;
  Resolver res(atm, d);
  ResolvedGraph g = res.resolve_all();
  ok &= d.ok();
  if (!d.ok()) std::fprintf(stderr, "%s", d.str().c_str());
  ok &= g.networks.size() == 1 && g.refinements.size() == 2;
  for (const char* m : {"ATM_Bank_Interaction_cd", "ATM_stm", "Bank_stm",
                        "System", "User_Interface", "ATM_Bank_Interaction"}) {
    bool found = false;
    for (const auto& [name, _] : g.models) found |= name == m;
    ok &= found;
  }
  double secs = seconds_since(t0);
  criterion(1, "network library parses as printed and resolves",
            ok && secs < 1.0, secs);
}

// --- criterion 2: the flagship network is consistent with a filmstrip ---

void criterion_2(const Library& atm) {
  auto t0 = std::chrono::steady_clock::now();
  VerdictKind v = VerdictKind::Unknown;
  ConsistencyReport rep;
  bool ok = check_verdict(atm, "N", Strategy::Incremental, v, &rep);
  ok &= v == VerdictKind::Consistent;
  ok &= messages_in_order(rep.witnessTrace,
                          {": insertCard(", ": enterPIN(", ": verify(",
                           ": verified(", ": ejectCard("});
  double secs = seconds_since(t0);
  criterion(2, "flagship network consistent with ordered filmstrip",
            ok && secs < 30.0, secs);
}

// --- criteria 3/4: broken variants flip to inconsistent, exactly ---

void criterion_3(const Library& variants) {
  auto t0 = std::chrono::steady_clock::now();
  VerdictKind v = VerdictKind::Unknown;
  ConsistencyReport rep;
  bool ok = check_verdict(variants, "N_rejecting", Strategy::Incremental, v,
                          &rep);
  ok &= v == VerdictKind::Inconsistent;
  ok &= rep.detail.find("exact") != std::string::npos;
  double secs = seconds_since(t0);
  criterion(3, "always-rejecting bank breaks the strict interaction",
            ok && secs < 60.0, secs);
}

void criterion_4(const Library& variants) {
  auto t0 = std::chrono::steady_clock::now();
  VerdictKind v = VerdictKind::Unknown;
  ConsistencyReport rep;
  bool ok = check_verdict(variants, "N_four", Strategy::Incremental, v, &rep);
  ok &= v == VerdictKind::Inconsistent;
  ok &= rep.detail.find("exact") != std::string::npos;
  double secs = seconds_since(t0);
  criterion(4, "a fourth PIN round exceeds the three-trial behaviour",
            ok && secs < 60.0, secs);
}

// --- criterion 5: the satisfaction condition, randomized ---

void criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(42);
  Bounds b;
  bool ok = true;
  for (int i = 0; i < 200 && ok; ++i) {
    oracle::SatTriple t = oracle::rand_triple(rng);
    ok &= check_satisfaction_condition(t.real, t.phi, t.sig, t.target, b);
    if (!ok) std::fprintf(stderr, "satisfaction condition broke at %d\n", i);
  }
  double secs = seconds_since(t0);
  criterion(5, "satisfaction condition on 200 randomized triples",
            ok && secs < 10.0, secs);
}

// --- criterion 6: strategies agree, both verdict kinds covered ---

void criterion_6(const Library& variants, const Library& shared,
                 std::vector<std::pair<const Library*, std::string>>& consistent) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  bool sawConsistent = false, sawInconsistent = false;
  const std::pair<const Library*, const char*> nets[] = {
      {&variants, "N_init"},      {&variants, "N_rejecting"},
      {&variants, "N_four"},      {&shared, "Pair_hub_a"},
      {&shared, "Pair_stocks"},   {&shared, "Joint"},
  };
  for (const auto& [lib, name] : nets) {
    VerdictKind inc = VerdictKind::Unknown, mono = VerdictKind::Unknown;
    ok &= check_verdict(*lib, name, Strategy::Incremental, inc);
    ok &= check_verdict(*lib, name, Strategy::Monolithic, mono);
    if (inc != mono) {
      std::fprintf(stderr, "strategy disagreement on %s: %s vs %s\n", name,
                   verdict_name(inc).c_str(), verdict_name(mono).c_str());
      ok = false;
    }
    sawConsistent |= inc == VerdictKind::Consistent;
    sawInconsistent |= inc == VerdictKind::Inconsistent;
    if (inc == VerdictKind::Consistent) consistent.push_back({lib, name});
  }
  ok &= sawConsistent && sawInconsistent;
  criterion(6, "incremental and monolithic verdicts coincide", ok,
            seconds_since(t0));
}

// --- criterion 7: pairwise consistent, jointly inconsistent ---

void criterion_7(const Library& shared) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (const char* name : {"Pair_hub_a", "Pair_hub_b", "Pair_stocks"}) {
    VerdictKind v = VerdictKind::Unknown;
    ok &= check_verdict(shared, name, Strategy::Incremental, v);
    ok &= v == VerdictKind::Consistent;
  }
  VerdictKind joint = VerdictKind::Unknown;
  ok &= check_verdict(shared, "Joint", Strategy::Incremental, joint);
  ok &= joint == VerdictKind::Inconsistent;
  double secs = seconds_since(t0);
  criterion(7, "pairwise consistent views, inconsistent union",
            ok && secs < 5.0, secs);
}

// --- criterion 8: the recognizer agrees with the denotational matcher ---

void criterion_8() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(777);
  const std::string names[3] = {"m1", "m2", "m3"};
  const BindEnv stage{{"a", Value(std::string("oa"))},
                      {"b", Value(std::string("ob"))}};
  bool ok = true;
  for (int round = 0; round < 50 && ok; ++round) {
    int budget = 7;
    TermPtr term = oracle::rand_term(rng, 3, budget);
    auto nfa = sd_to_nfa(oracle::wrap_term(term));
    auto lang = oracle::olang(term);
    std::vector<std::vector<int>> frontier{{}};
    for (int len = 0; len <= 6 && ok; ++len) {
      std::vector<std::vector<int>> next;
      for (const auto& word : frontier) {
        Trace t;
        std::vector<std::string> ns;
        for (int i : word) {
          t.push_back(oracle::stage_event(names[i]));
          ns.push_back(names[i]);
        }
        if ((lang.count(ns) > 0) != matches(t, nfa, stage)) {
          std::fprintf(stderr, "matcher disagreement in round %d\n", round);
          ok = false;
          break;
        }
        if (len < 6)
          for (int i = 0; i < 3; ++i) {
            auto w = word;
            w.push_back(i);
            next.push_back(std::move(w));
          }
      }
      frontier = std::move(next);
    }
  }
  {  // loop(0,3){m1} accepts exactly the four words of length 0..3
    InteractionTerm loop;
    loop.kind = InteractionTerm::Kind::Loop;
    loop.lo = 0;
    loop.hi = 3;
    loop.children.push_back(oracle::msg_term("m1"));
    auto nfa = sd_to_nfa(oracle::wrap_term(oracle::mk(std::move(loop))));
    int accepted = 0;
    for (int n = 0; n <= 6; ++n)
      accepted += matches(Trace(n, oracle::stage_event("m1")), nfa, stage);
    ok &= accepted == 4;
  }
  criterion(8, "interaction recognizer matches the reference matcher", ok,
            seconds_since(t0));
}

// --- criterion 9: consistent verdicts survive decentralized re-checking ---

void criterion_9(
    const Library& atm,
    const std::vector<std::pair<const Library*, std::string>>& consistent) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::vector<std::pair<const Library*, std::string>> all = consistent;
  all.push_back({&atm, "N"});
  for (const auto& [lib, name] : all) {
    VerdictKind v = VerdictKind::Unknown;
    ok &= check_verdict(*lib, name, Strategy::Decentralized, v);
    if (v != VerdictKind::Consistent) {
      std::fprintf(stderr, "decentralized re-check of %s: %s\n", name.c_str(),
                   verdict_name(v).c_str());
      ok = false;
    }
  }
  criterion(9, "witnesses re-verify under the decentralized strategy", ok,
            seconds_since(t0));
}

// --- criterion 10: bounded enumeration counts match the oracle ---

void criterion_10() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  Diagnostics d;
  Bounds b;
  b.maxObjectsPerClass = 2;
  const char* cases[] = {
      "classdiagram D\nclass C { attr f : Bool }\n",
      "classdiagram D\nclass C { attr f : Bool  attr g : Bool }\n",
      "classdiagram D\nclass X { attr f : Bool }\nclass Y { }\n"
      "assoc A : X [*] x -- y [0..*] Y\n",
      "classdiagram D\nclass X { }\nclass Y { }\n"
      "assoc A : X [0..1] x -- y [1..1] Y\n",
  };
  for (const char* text : cases) {
    ClassModel m = parse_cd(text, d);
    if (!d.ok()) {
      ok = false;
      break;
    }
    size_t got = enumerate_snapshots(m, b).size();
    size_t want = oracle::iso_count(m, 2);
    if (got != want) {
      std::fprintf(stderr, "enumeration mismatch: got %zu want %zu for\n%s",
                   got, want, text);
      ok = false;
    }
  }
  {  // the hand-counted case: one boolean class, empty shape included
    ClassModel m = parse_cd("classdiagram D\nclass C { attr f : Bool }\n", d);
    ok &= enumerate_snapshots(m, b).size() == 6;
  }
  criterion(10, "bounded enumeration counts match exhaustive quotient", ok,
            seconds_since(t0));
}

}  // namespace

int main() {
  std::string dir = models_dir();
  Library atm = load_lib(dir + "/atm", "atm.dol");
  Library variants = load_lib(dir + "/atm", "variants.dol");
  Library shared = load_lib(dir + "/shared", "shared.dol");

  criterion_1(atm);
  criterion_2(atm);
  criterion_3(variants);
  criterion_4(variants);
  criterion_5();
  std::vector<std::pair<const Library*, std::string>> consistent;
  criterion_6(variants, shared, consistent);
  criterion_7(shared);
  criterion_8();
  criterion_9(atm, consistent);
  criterion_10();

  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
