#include <doctest.h>

#include "mvcheck/enumerate.hpp"
#include "oracles.hpp"

using namespace mvcheck;

namespace {

ClassModel cd_of(const std::string& text) {
  Diagnostics d;
  ClassModel m = parse_cd(text, d);
  REQUIRE_MESSAGE(d.ok(), d.str());
  return m;
}

}  // namespace

TEST_CASE("one boolean class, two objects: six shapes") {
  // 0 objects: 1; 1 object: {F},{T}; 2 objects: {FF},{FT},{TT}.
  ClassModel m = cd_of("classdiagram D\nclass C { attr f : Bool }\n");
  Bounds b;
  b.maxObjectsPerClass = 2;
  auto snaps = enumerate_snapshots(m, b);
  CHECK(snaps.size() == 6);
  CHECK(snaps.front().objects.empty());  // ordered by object count
  CHECK(oracle::iso_count(m, 2) == 6);
}

TEST_CASE("enumeration counts match the exhaustive oracle") {
  Bounds b;
  b.maxObjectsPerClass = 2;
  const char* cases[] = {
      "classdiagram D\nclass C { attr f : Bool  attr g : Bool }\n",
      "classdiagram D\nclass C { }\nclass E { attr f : Bool }\n",
      "classdiagram D\nclass X { }\nclass Y { }\n"
      "assoc A : X [*] x -- y [0..*] Y\n",
      "classdiagram D\nclass X { attr f : Bool }\nclass Y { }\n"
      "assoc A : X [0..1] x -- y [1..1] Y\n",
      "classdiagram D\nclass C { attr g : Int 0 .. 2 }\n"
      "inv C : self.g <= 1\n",
      "classdiagram D\nclass N { }\nassoc S : N [0..1] prev -- next [0..1] N\n",
  };
  for (const char* text : cases) {
    CAPTURE(text);
    ClassModel m = cd_of(text);
    auto snaps = enumerate_snapshots(m, b);
    // every produced snapshot conforms and they are pairwise non-isomorphic
    std::set<std::string> keys;
    for (const auto& s : snaps) {
      CHECK(conforms(s, m));
      keys.insert(oracle::iso_key(s));
    }
    CHECK(keys.size() == snaps.size());
    CHECK(snaps.size() == oracle::iso_count(m, 2));
  }
}

TEST_CASE("anchored enumeration keeps the anchor rigid") {
  ClassModel m = cd_of("classdiagram D\nclass C { attr f : Bool }\n");
  Snapshot anchor;
  ObjectState st;
  st.cls = "C";
  st.attrs["f"] = Value(true);
  anchor.objects["seed"] = st;

  Bounds b;
  b.maxObjectsPerClass = 2;
  auto snaps = enumerate_snapshots(m, b, anchor);
  // extensions: none, one F, one T  (extras are quotiented, seed is rigid)
  CHECK(snaps.size() == 3);
  for (const auto& s : snaps) {
    REQUIRE(s.objects.count("seed"));
    CHECK(s.objects.at("seed").attrs.at("f") == Value(true));
    CHECK(embeds(s, anchor));
    CHECK(s.objects.size() <= 2);
  }
}

TEST_CASE("anchors violating bounds or conformance yield nothing") {
  ClassModel m = cd_of(
      "classdiagram D\nclass C { attr g : Int 0 .. 2 }\ninv C : self.g <= 1\n");
  Snapshot bad;
  ObjectState st;
  st.cls = "C";
  st.attrs["g"] = Value(2LL);  // violates the invariant
  bad.objects["c"] = st;
  Bounds b;
  CHECK(enumerate_snapshots(m, b, bad).empty());

  Snapshot three;
  for (int i = 0; i < 3; ++i) {
    ObjectState o;
    o.cls = "C";
    o.attrs["g"] = Value(0LL);
    three.objects["c" + std::to_string(i)] = o;
  }
  CHECK(enumerate_snapshots(m, b, three).empty());  // over maxObjectsPerClass
}

TEST_CASE("bounds render for reports") {
  Bounds b;
  CHECK(b.str() ==
        "max-objects=2 depth=60 queue-depth=2 max-states=100000");
}
