#include <doctest.h>

#include <random>

#include "mvcheck/kernel.hpp"
#include "oracles.hpp"

using namespace mvcheck;

namespace {

ClassModel cd_of(const std::string& text) {
  Diagnostics d;
  ClassModel m = parse_cd(text, d);
  REQUIRE_MESSAGE(d.ok(), d.str());
  return m;
}

Theory cd_theory(const std::string& name, const std::string& text) {
  Theory t;
  t.institution = InstitutionId::CD;
  t.name = name;
  t.data = cd_of(text);
  return t;
}

}  // namespace

TEST_CASE("theories derive their sentences by institution") {
  Theory t = cd_theory("D",
      "classdiagram D\n"
      "class C { attr g : Int 0 .. 2 }\n"
      "class E { }\n"
      "assoc A : C [0..1] c -- e [*] E\n"
      "inv C : self.g <= 1\n");
  auto sents = t.sentences();
  int data = 0;
  for (const auto& s : sents) data += s.kind == Sentence::Kind::Data;
  CHECK(data == 3);  // two multiplicity ends + one invariant
  CHECK((int)sents.size() == data);

  t.dataSentences = false;  // typing-only (object-diagram node)
  CHECK(t.sentences().empty());

  Diagnostics d;
  Theory stm = t;
  stm.dataSentences = true;
  stm.institution = InstitutionId::STM;
  stm.machines.push_back(parse_stm(
      "statemachine M for C {\n  init S\n  state S\n  S -> S on g0\n}\n", d));
  // machine clauses: one structural plus one per transition
  int machine = 0;
  for (const auto& s : stm.sentences())
    machine += s.kind == Sentence::Kind::Machine;
  CHECK(machine == 2);
}

TEST_CASE("data sentences hold on every reachable snapshot") {
  Theory t = cd_theory("D",
      "classdiagram D\nclass C { attr g : Int 0 .. 2 }\ninv C : self.g <= 1\n");
  auto ts = std::make_shared<TransitionSystem>();
  TsState ok1, ok2;
  ok1.snapshot.objects["c"] = {"C", {{"g", Value(0LL)}}};
  ok2.snapshot.objects["c"] = {"C", {{"g", Value(1LL)}}};
  ts->states = {ok1, ok2};
  ts->initial = {0};
  TsTransition tr;
  tr.from = 0;
  tr.to = 1;
  tr.label.message = "m";
  ts->transitions = {tr};

  Realization r;
  r.institution = InstitutionId::CD;
  r.ts = ts;
  Bounds b;
  for (const auto& s : t.sentences()) {
    bool exact = false;
    std::string why;
    CHECK(satisfies(r, s, b, &exact, &why));
    CHECK(exact);
  }

  // break the invariant in the second state
  auto ts2 = std::make_shared<TransitionSystem>(*ts);
  ts2->states[1].snapshot.objects["c"].attrs["g"] = Value(2LL);
  Realization r2;
  r2.institution = InstitutionId::CD;
  r2.ts = ts2;
  bool someFail = false;
  for (const auto& s : t.sentences()) {
    std::string why;
    if (!satisfies(r2, s, b, nullptr, &why)) {
      someFail = true;
      CHECK(!why.empty());
    }
  }
  CHECK(someFail);
}

TEST_CASE("missing realizations fail with a reason, not a crash") {
  Theory t = cd_theory("D", "classdiagram D\nclass C { }\n");
  Realization none;
  none.institution = InstitutionId::CD;
  Bounds b;
  for (const auto& s : t.sentences()) {
    std::string why;
    CHECK(!satisfies(none, s, b, nullptr, &why));
    CHECK(!why.empty());
  }
}

TEST_CASE("satisfaction condition holds on 200 randomized triples") {
  std::mt19937 rng(12345);
  Bounds b;
  for (int i = 0; i < 200; ++i) {
    oracle::SatTriple t = oracle::rand_triple(rng);
    CAPTURE(i);
    CHECK(check_satisfaction_condition(t.real, t.phi, t.sig, t.target, b));
  }
}

TEST_CASE("sentence translation renames symbols structurally") {
  Theory t = cd_theory("D",
      "classdiagram D\nclass C { attr g : Int 0 .. 2 }\ninv C : self.g <= 1\n");
  SignatureMorphism sig;
  sig.classMap = {{"C", "K"}};
  sig.attrMap = {{{"C", "g"}, "h"}};
  for (const auto& s : t.sentences()) {
    Sentence moved = translate_sentence(s, sig);
    std::string text = moved.str();
    CHECK(text.find("C") == std::string::npos);
    CHECK(text.find("g") == std::string::npos);
  }
}

TEST_CASE("theory merge: unions, intersection of multiplicities, conflicts") {
  Theory a = cd_theory("A",
      "classdiagram A\nclass C { attr g : Int 0 .. 2 }\nclass D { }\n"
      "assoc R : C [0..2] c -- d [*] D\n");
  Theory b = cd_theory("B",
      "classdiagram B\nclass C { attr g : Int 0 .. 2 }\nclass E { }\n"
      "assoc R : C [1..1] c -- d [0..1] D\n");
  // merge requires D known on b's side too
  b.data.classes.push_back(ClassDef{"D", "", {}, {}, 0});

  Diagnostics d;
  Theory u = merge_theories(a, b, d);
  REQUIRE_MESSAGE(d.ok(), d.str());
  CHECK(u.data.classes.size() == 3);  // C, D, E
  REQUIRE(u.data.find_assoc("R"));
  CHECK(u.data.find_assoc("R")->a.mult == Mult{1, 1});  // [0..2] ∩ [1..1]
  CHECK(u.data.find_assoc("R")->b.mult == Mult{0, 1});  // [*] ∩ [0..1]

  Theory c = cd_theory("Cc", "classdiagram Cc\nclass C { attr g : Bool }\n");
  Diagnostics d2;
  merge_theories(a, c, d2);
  CHECK(!d2.ok());  // same class, different attribute type

  Theory sd;
  sd.institution = InstitutionId::SD;
  Diagnostics d3;
  merge_theories(a, sd, d3);
  CHECK(!d3.ok());  // institutions differ
}

TEST_CASE("reducts forget renamed structure and satisfaction transfers") {
  // concrete: one class K with attribute h; abstract view C/g via sigma
  Theory src = cd_theory("S",
      "classdiagram S\nclass C { attr g : Int 0 .. 2 }\ninv C : self.g <= 1\n");
  SignatureMorphism sig;
  sig.institution = InstitutionId::CD;
  sig.classMap = {{"C", "K"}};
  sig.attrMap = {{{"C", "g"}, "h"}};
  ClassModel target = rename_class_model(src.data, sig);
  REQUIRE(target.find_class("K"));

  auto ts = std::make_shared<TransitionSystem>();
  TsState st;
  st.snapshot.objects["k0"] = {"K", {{"h", Value(1LL)}}};
  ts->states = {st};
  ts->initial = {0};
  Realization rK;
  rK.institution = InstitutionId::CD;
  rK.ts = ts;

  Realization rC = reduct(rK, sig, target);
  REQUIRE(rC.ts);
  const Snapshot& back = rC.ts->states[0].snapshot;
  REQUIRE(back.objects.count("k0"));
  CHECK(back.objects.at("k0").cls == "C");
  CHECK(back.objects.at("k0").attrs.count("g"));

  Bounds b;
  for (const auto& phi : src.sentences())
    CHECK(satisfies(rC, phi, b) ==
          satisfies(rK, translate_sentence(phi, sig), b));
}

TEST_CASE("institution names render") {
  CHECK(institution_name(InstitutionId::CD) == "CD");
  CHECK(institution_name(InstitutionId::STM) == "STM");
  CHECK(institution_name(InstitutionId::CMP) == "CMP");
  CHECK(institution_name(InstitutionId::SD) == "SD");
}
