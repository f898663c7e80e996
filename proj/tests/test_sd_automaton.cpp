#include <doctest.h>

#include <random>

#include "mvcheck/automaton.hpp"
#include "mvcheck/sd.hpp"
#include "oracles.hpp"

using namespace mvcheck;

namespace {

InteractionModel sd_of(const std::string& text) {
  Diagnostics d;
  InteractionModel sd = parse_sd(text, d);
  REQUIRE_MESSAGE(d.ok(), d.str());
  wellformed_sd(sd, d);
  REQUIRE_MESSAGE(d.ok(), d.str());
  return sd;
}

EventLabel ev(const std::string& from, const std::string& to,
              const std::string& msg, std::vector<Value> args = {}) {
  EventLabel e;
  e.sender = from;
  e.receiver = to;
  e.message = msg;
  e.args = std::move(args);
  return e;
}

const BindEnv kStage{{"a", Value(std::string("oa"))},
                     {"b", Value(std::string("ob"))}};

}  // namespace

TEST_CASE("interaction parsing and alphabet") {
  InteractionModel sd = sd_of(
      "interaction T {\n"
      "  lifeline a : A\n"
      "  lifeline b : B\n"
      "  msg a -> b : m1()\n"
      "  opt { msg b -> a : m2(p : Int 0 .. 2) }\n"
      "  loop(1, 2) { msg a -> b : m3(p) }\n"
      "}\n");
  CHECK(sd.lifelines.size() == 2);
  auto msgs = sd_messages(sd);
  CHECK(msgs == std::set<std::string>{"m1", "m2", "m3"});
  auto vt = sd_var_types(sd, nullptr);
  REQUIRE(vt.count("p"));
  CHECK(vt.at("p").is_int());
  auto sig = sd_message_sig(sd);
  REQUIRE(sig.count("m3"));
  REQUIRE(sig.at("m3").size() == 1);
  REQUIRE(sig.at("m3")[0].has_value());
  CHECK(sig.at("m3")[0]->is_int());
}

TEST_CASE("basic matching with sequencing, alt, opt, loop") {
  InteractionModel sd = sd_of(
      "interaction T {\n"
      "  lifeline a : A\n"
      "  lifeline b : B\n"
      "  msg a -> b : m1()\n"
      "  alt { msg b -> a : m2() } else { msg a -> b : m3() }\n"
      "}\n");
  auto nfa = sd_to_nfa(sd);
  CHECK(matches({ev("oa", "ob", "m1"), ev("ob", "oa", "m2")}, nfa, kStage));
  CHECK(matches({ev("oa", "ob", "m1"), ev("oa", "ob", "m3")}, nfa, kStage));
  CHECK(!matches({ev("oa", "ob", "m1")}, nfa, kStage));
  CHECK(!matches({ev("ob", "oa", "m2")}, nfa, kStage));
  // wrong direction: m1 must flow a -> b under the seeded binding
  CHECK(!matches({ev("ob", "oa", "m1"), ev("ob", "oa", "m2")}, nfa, kStage));
}

TEST_CASE("out-of-alphabet events are projected away") {
  InteractionModel sd = sd_of(
      "interaction T {\n"
      "  lifeline a : A\n"
      "  lifeline b : B\n"
      "  msg a -> b : m1()\n"
      "}\n");
  auto nfa = sd_to_nfa(sd);
  CHECK(matches({ev("oa", "ob", "noise"), ev("oa", "ob", "m1"),
                 ev("env", "oa", "noise")},
                nfa, kStage));
  CHECK(!matches({ev("oa", "ob", "noise")}, nfa, kStage));
}

TEST_CASE("loop(0,3) over one message accepts exactly four words") {
  InteractionTerm loop;
  loop.kind = InteractionTerm::Kind::Loop;
  loop.lo = 0;
  loop.hi = 3;
  loop.children.push_back(oracle::msg_term("m1"));
  InteractionModel sd = oracle::wrap_term(oracle::mk(std::move(loop)));
  auto nfa = sd_to_nfa(sd);
  int accepted = 0;
  for (int n = 0; n <= 6; ++n) {
    Trace t(n, oracle::stage_event("m1"));
    accepted += matches(t, nfa, kStage);
  }
  CHECK(accepted == 4);  // lengths 0, 1, 2, 3
}

TEST_CASE("nfa agrees with the denotational matcher on random terms") {
  std::mt19937 rng(12345);
  const std::string names[3] = {"m1", "m2", "m3"};
  for (int round = 0; round < 50; ++round) {
    int budget = 7;
    TermPtr term = oracle::rand_term(rng, 3, budget);
    InteractionModel sd = oracle::wrap_term(term);
    auto nfa = sd_to_nfa(sd);
    auto lang = oracle::olang(term);
    // walk every trace up to length 6 over the three-message alphabet
    std::vector<std::vector<int>> frontier{{}};
    for (int len = 0; len <= 6; ++len) {
      std::vector<std::vector<int>> next;
      for (const auto& word : frontier) {
        Trace t;
        std::vector<std::string> namesOf;
        for (int i : word) {
          t.push_back(oracle::stage_event(names[i]));
          namesOf.push_back(names[i]);
        }
        bool expect = lang.count(namesOf) > 0;
        bool got = matches(t, nfa, kStage);
        if (expect != got) {
          CAPTURE(sd_text(sd));
          CAPTURE(trace_str(t));
          REQUIRE(expect == got);
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
}

TEST_CASE("variables bind once and compare afterwards") {
  InteractionModel sd = sd_of(
      "interaction T {\n"
      "  lifeline a : A\n"
      "  lifeline b : B\n"
      "  msg a -> b : m1(p : Int 0 .. 2)\n"
      "  msg a -> b : m2(p)\n"
      "}\n");
  auto nfa = sd_to_nfa(sd);
  CHECK(matches({ev("oa", "ob", "m1", {Value(1LL)}),
                 ev("oa", "ob", "m2", {Value(1LL)})},
                nfa, kStage));
  CHECK(!matches({ev("oa", "ob", "m1", {Value(1LL)}),
                  ev("oa", "ob", "m2", {Value(2LL)})},
                 nfa, kStage));
}

TEST_CASE("literals and wildcards in argument patterns") {
  InteractionModel sd = sd_of(
      "interaction T {\n"
      "  lifeline a : A\n"
      "  lifeline b : B\n"
      "  msg a -> b : m1(1, _)\n"
      "}\n");
  auto nfa = sd_to_nfa(sd);
  CHECK(matches({ev("oa", "ob", "m1", {Value(1LL), Value(true)})}, nfa, kStage));
  CHECK(matches({ev("oa", "ob", "m1", {Value(1LL), Value(0LL)})}, nfa, kStage));
  CHECK(!matches({ev("oa", "ob", "m1", {Value(2LL), Value(0LL)})}, nfa, kStage));
  CHECK(!matches({ev("oa", "ob", "m1", {Value(1LL)})}, nfa, kStage));
}

TEST_CASE("lifelines bind lazily and injectively") {
  InteractionModel sd = sd_of(
      "interaction T {\n"
      "  lifeline a : A\n"
      "  lifeline b : A\n"
      "  msg a -> b : m1()\n"
      "  msg b -> a : m2()\n"
      "}\n");
  auto nfa = sd_to_nfa(sd);
  // unseeded: a binds to the first sender, b to the receiver
  CHECK(matches({ev("x", "y", "m1"), ev("y", "x", "m2")}, nfa));
  // injectivity: a and b cannot both bind object x
  CHECK(!matches({ev("x", "x", "m1"), ev("x", "x", "m2")}, nfa));
}

TEST_CASE("lifeline seeds enumerate class-compatible injective bindings") {
  Diagnostics d;
  ClassModel cd = parse_cd(
      "classdiagram D\n"
      "class A { }\n"
      "class ASub extends A { }\n"
      "class B { }\n", d);
  REQUIRE(d.ok());
  InteractionModel sd = sd_of(
      "interaction T {\n"
      "  lifeline a : A\n"
      "  lifeline b : B\n"
      "  msg a -> b : m1()\n"
      "}\n");
  Snapshot s;
  s.objects["a0"] = {"A", {}};
  s.objects["a1"] = {"ASub", {}};
  s.objects["b0"] = {"B", {}};
  // with the class model, the subclass object is eligible for lifeline a
  auto seeds = lifeline_seeds(sd, s, &cd);
  CHECK(seeds.size() == 2);
  // without it, classes compare by name only
  auto seedsNoCd = lifeline_seeds(sd, s, nullptr);
  CHECK(seedsNoCd.size() == 1);
}

TEST_CASE("transition-system satisfaction finds a witness path") {
  // two states: m1 fires from 0 to 1
  auto ts = std::make_shared<TransitionSystem>();
  TsState s0, s1;
  s0.snapshot.objects["oa"] = {"A", {}};
  s0.snapshot.objects["ob"] = {"B", {}};
  s1 = s0;
  ts->states = {s0, s1};
  ts->initial = {0};
  TsTransition tr;
  tr.from = 0;
  tr.to = 1;
  tr.label = ev("oa", "ob", "m1");
  tr.observable = true;
  ts->transitions = {tr};

  InteractionModel sd = sd_of(
      "interaction T {\n"
      "  lifeline a : A\n"
      "  lifeline b : B\n"
      "  msg a -> b : m1()\n"
      "}\n");
  bool complete = false;
  Trace witness;
  long long productStates = 0;
  CHECK(ts_satisfies_sd(*ts, sd, nullptr, 100000, &complete, &witness,
                        &productStates));
  REQUIRE(witness.size() == 1);
  CHECK(witness[0].message == "m1");
  CHECK(productStates > 0);

  InteractionModel sd2 = sd_of(
      "interaction T {\n"
      "  lifeline a : A\n"
      "  lifeline b : B\n"
      "  msg b -> a : m1()\n"
      "}\n");
  bool complete2 = false;
  CHECK(!ts_satisfies_sd(*ts, sd2, nullptr, 100000, &complete2, nullptr,
                         nullptr));
  CHECK(complete2);  // exhaustive refusal
}
