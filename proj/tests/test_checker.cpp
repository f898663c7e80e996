#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>

#include "mvcheck/checker.hpp"

using namespace mvcheck;

namespace {

Library lib_of(const std::string& dolText,
               std::map<std::string, std::string> files) {
  Diagnostics d;
  Library lib;
  lib.rootDir = "/nonexistent";
  lib.overrides = std::move(files);
  lib.dol = parse_dol(dolText, d);
  REQUIRE_MESSAGE(d.ok(), d.str());
  return lib;
}

ResolvedNetwork net_of(const Library& lib, const std::string& name) {
  Diagnostics d;
  Resolver res(lib, d);
  auto n = res.network(name);
  REQUIRE_MESSAGE(n.has_value(), d.str());
  REQUIRE_MESSAGE(d.ok(), d.str());
  return *n;
}

// A tick-tock machine over a one-class diagram, plus object diagrams that
// agree and disagree with each other.
const char* kCd =
    "classdiagram World\n"
    "class C {\n"
    "  attr g : Int 0 .. 2\n"
    "  reception tick()\n"
    "}\n";

const char* kStm =
    "statemachine Tick for C {\n"
    "  init S\n"
    "  state S\n"
    "  S -> S on tick [self.g < 2] / g := self.g + 1; send env.tick()\n"
    "}\n";

const char* kSdSome =
    "interaction Some {\n"
    "  lifeline c : C\n"
    "  msg env -> c : tick()\n"
    "  msg c -> env : tick()\n"
    "}\n";

const char* kSdNever =
    "interaction Never {\n"
    "  lifeline c : C\n"
    "  msg c -> env : nak()\n"
    "}\n";

const std::map<std::string, std::string> kFiles = {
    {"World.cd", kCd},
    {"Tick.stm", kStm},
    {"Some.sd", kSdSome},
    {"Never.sd", kSdNever},
    {"A0.od", "objectdiagram A0 for World {\n  c0 : C { g = 0 }\n}\n"},
    {"A1.od", "objectdiagram A1 for World {\n  c0 : C { g = 1 }\n}\n"},
};

const char* kDol =
    "model M =\n  World with translation cd2stm\nthen\n  Tick\nend\n"
    "network Data = %consistent\n  World, A0\nend\n"
    "network Clash =\n  World, A0, A1\nend\n"
    "network Live = %consistent\n  World, M, Some\nend\n"
    "network Dead =\n  World, M, Never\nend\n";

CheckResult run(const ResolvedNetwork& n, Strategy st = Strategy::Incremental,
                Bounds b = Bounds{}, bool wantWitness = false) {
  Diagnostics d;
  CheckOptions o;
  o.bounds = b;
  o.strategy = st;
  o.wantWitness = wantWitness;
  auto r = check_network(n, o, d);
  return r;
}

}  // namespace

TEST_CASE("structural network with an anchor is consistent") {
  Library lib = lib_of(kDol, kFiles);
  auto res = run(net_of(lib, "Data"));
  CHECK(res.report.verdict == VerdictKind::Consistent);
  REQUIRE(!res.report.models.empty());
  for (const auto& m : res.report.models) CHECK(m.status == "satisfied");
  REQUIRE(!res.report.witnessInit.empty());
  bool hasAnchor = false;
  for (const auto& line : res.report.witnessInit)
    hasAnchor |= line.find("c0") != std::string::npos;
  CHECK(hasAnchor);
}

TEST_CASE("contradicting anchors are inconsistent") {
  Library lib = lib_of(kDol, kFiles);
  auto res = run(net_of(lib, "Clash"));
  CHECK(res.report.verdict == VerdictKind::Inconsistent);
}

TEST_CASE("behavioural network with a realizable interaction is consistent") {
  Library lib = lib_of(kDol, kFiles);
  auto res = run(net_of(lib, "Live"));
  CHECK(res.report.verdict == VerdictKind::Consistent);
  REQUIRE(!res.report.witnessTrace.empty());
  bool sawTick = false;
  for (const auto& line : res.report.witnessTrace)
    sawTick |= line.find("tick") != std::string::npos;
  CHECK(sawTick);
}

TEST_CASE("an interaction no run can exhibit is inconsistent") {
  Library lib = lib_of(kDol, kFiles);
  auto res = run(net_of(lib, "Dead"));
  CHECK(res.report.verdict == VerdictKind::Inconsistent);
  // the interaction view is the one that fails
  bool violated = false;
  for (const auto& m : res.report.models)
    if (m.name == "Never") violated = m.status == "violated";
  CHECK(violated);
}

TEST_CASE("strategies agree on every inline network") {
  Library lib = lib_of(kDol, kFiles);
  for (const char* name : {"Data", "Clash", "Live", "Dead"}) {
    CAPTURE(name);
    auto n = net_of(lib, name);
    auto inc = run(n, Strategy::Incremental);
    auto mono = run(n, Strategy::Monolithic);
    auto dec = run(n, Strategy::Decentralized);
    CHECK(inc.report.verdict == mono.report.verdict);
    CHECK(inc.report.verdict == dec.report.verdict);
  }
}

TEST_CASE("decentralized re-verification is reported") {
  Library lib = lib_of(kDol, kFiles);
  auto res = run(net_of(lib, "Live"), Strategy::Decentralized);
  CHECK(res.report.verdict == VerdictKind::Consistent);
  CHECK(res.report.detail.find("re-verified") != std::string::npos);
}

TEST_CASE("resource caps give unknown, not inconsistent") {
  Library lib = lib_of(kDol, kFiles);
  Bounds tiny;
  tiny.maxStates = 1;
  auto res = run(net_of(lib, "Live"), Strategy::Incremental, tiny);
  CHECK(res.report.verdict == VerdictKind::Unknown);
  CHECK(verdict_exit_code(res.report.verdict) == 2);
}

TEST_CASE("witness bundles re-verify and detect tampering") {
  Library lib = lib_of(kDol, kFiles);
  auto n = net_of(lib, "Live");
  auto res = run(n, Strategy::Incremental, Bounds{}, true);
  REQUIRE(res.report.verdict == VerdictKind::Consistent);
  REQUIRE(res.witness.has_value());

  Diagnostics d;
  std::string why;
  CHECK_MESSAGE(verify_witness(n, *res.witness, d, &why), why);

  WitnessBundle bent = *res.witness;
  REQUIRE(!bent.digests.empty());
  bent.digests.begin()->second = "0000000000000000";
  Diagnostics d2;
  std::string why2;
  CHECK(!verify_witness(n, bent, d2, &why2));
  CHECK(!why2.empty());

  WitnessBundle moved = *res.witness;
  REQUIRE(!moved.systemTs.states.empty());
  moved.systemTs.states[0].snapshot.objects["ghost"] = {"C", {{"g", Value(0LL)}}};
  Diagnostics d3;
  CHECK(!verify_witness(n, moved, d3, nullptr));
}

TEST_CASE("witness bundles round-trip through disk") {
  Library lib = lib_of(kDol, kFiles);
  auto n = net_of(lib, "Live");
  auto res = run(n, Strategy::Incremental, Bounds{}, true);
  REQUIRE(res.witness.has_value());

  auto dir = std::filesystem::temp_directory_path() / "mvcheck_wtest";
  std::filesystem::remove_all(dir);
  Diagnostics d;
  REQUIRE(write_witness(*res.witness, dir.string(), d));
  auto back = read_witness(dir.string(), d);
  REQUIRE_MESSAGE(back.has_value(), d.str());
  CHECK(back->network == res.witness->network);
  CHECK(back->digests == res.witness->digests);
  CHECK(back->systemTs.canonical_text() == res.witness->systemTs.canonical_text());
  CHECK(trace_str(back->trace) == trace_str(res.witness->trace));

  Diagnostics d2;
  std::string why;
  CHECK_MESSAGE(verify_witness(n, *back, d2, &why), why);
  std::filesystem::remove_all(dir);
}

TEST_CASE("check_theory wraps a single view") {
  Library lib = lib_of(kDol, kFiles);
  Diagnostics d;
  Resolver res(lib, d);
  Theory t = res.model("World");
  REQUIRE(d.ok());
  Diagnostics d2;
  CheckOptions o;
  auto r = check_theory("World", t, o, d2);
  CHECK(r.report.verdict == VerdictKind::Consistent);
}

TEST_CASE("reports render to text and stable structured form") {
  Library lib = lib_of(kDol, kFiles);
  auto res = run(net_of(lib, "Live"));
  std::string text = to_text(res.report);
  CHECK(text.find("CONSISTENT") != std::string::npos);
  CHECK(text.find("Live") != std::string::npos);

  std::string js = to_json(res.report);
  CHECK(js == to_json(res.report));
  auto parsed = nlohmann::json::parse(js);
  CHECK(parsed.at("network") == "Live");
  CHECK(parsed.at("verdict") == "CONSISTENT");
  CHECK(parsed.at("bounds").is_object());
  CHECK(parsed.at("models").is_array());
  // wall time is omitted unless explicitly timed
  CHECK(!parsed.contains("wallSeconds"));
}

TEST_CASE("verdict names and exit codes") {
  CHECK(std::string(verdict_name(VerdictKind::Consistent)) == "CONSISTENT");
  CHECK(std::string(verdict_name(VerdictKind::Inconsistent)) == "INCONSISTENT");
  CHECK(std::string(verdict_name(VerdictKind::Unknown)) == "UNKNOWN");
  CHECK(verdict_exit_code(VerdictKind::Consistent) == 0);
  CHECK(verdict_exit_code(VerdictKind::Inconsistent) == 1);
  CHECK(verdict_exit_code(VerdictKind::Unknown) == 2);
}
