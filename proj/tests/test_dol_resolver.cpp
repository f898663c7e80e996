#include <doctest.h>

#include "mvcheck/dol.hpp"
#include "mvcheck/resolver.hpp"

using namespace mvcheck;

namespace {

DolFile dol_of(const std::string& text) {
  Diagnostics d;
  DolFile f = parse_dol(text, d);
  REQUIRE_MESSAGE(d.ok(), d.str());
  return f;
}

Library lib_of(const std::string& dolText,
               std::map<std::string, std::string> files) {
  Library lib;
  lib.rootDir = "/nonexistent";
  lib.overrides = std::move(files);
  lib.dol = dol_of(dolText);
  return lib;
}

const char* kCtx =
    "classdiagram Ctx\n"
    "class A { attr f : Bool  reception m(p : Bool) }\n"
    "class B { reception k() }\n"
    "assoc L : A [*] a -- b [0..*] B\n";

const char* kSd =
    "interaction Talk {\n"
    "  lifeline a : A\n"
    "  lifeline b : B\n"
    "  msg env -> a : m(p : Bool)\n"
    "  msg a -> b : k()\n"
    "}\n";

}  // namespace

TEST_CASE("network language parsing covers all declaration kinds") {
  DolFile f = dol_of(
      "model M =\n  Base with translation cd2stm\nthen\n  Steps\nend\n"
      "refinement R =\n  { V reveal W } refined to C\nend\n"
      "network N = %consistent\n  M, R, Base\nend\n");
  REQUIRE(f.decls.size() == 3);
  CHECK(f.decls[0].kind == DolDecl::Kind::Model);
  CHECK(f.decls[1].kind == DolDecl::Kind::Refinement);
  CHECK(f.decls[2].kind == DolDecl::Kind::Network);
  CHECK(f.decls[2].annotations == std::vector<std::string>{"consistent"});
  CHECK(f.decls[2].elements == std::vector<std::string>{"M", "R", "Base"});
  REQUIRE(f.find("M"));
  CHECK(f.find("nothere") == nullptr);
}

TEST_CASE("suffixes bind tighter than and, which binds tighter than then") {
  DolFile f = dol_of(
      "model S =\n"
      "  X with translation stm2cmp with cid |-> atm\n"
      "and\n"
      "  Y with translation stm2cmp with cid |-> bank\n"
      "then\n"
      "  Z\n"
      "end\n");
  const ModelExpr& e = *f.decls[0].expr;
  REQUIRE(e.kind == ModelExpr::Kind::Then);
  REQUIRE(e.lhs->kind == ModelExpr::Kind::And);
  CHECK(e.rhs->kind == ModelExpr::Kind::Ref);
  const ModelExpr& left = *e.lhs->lhs;
  REQUIRE(left.kind == ModelExpr::Kind::WithRename);
  CHECK(left.renames ==
        std::vector<std::pair<std::string, std::string>>{{"cid", "atm"}});
  CHECK(left.lhs->kind == ModelExpr::Kind::WithTranslation);
  CHECK(left.lhs->name == "stm2cmp");
  CHECK(left.lhs->lhs->name == "X");
}

TEST_CASE("printing is a fixed point after one round") {
  const char* texts[] = {
      "model M =\n  A hide along sd2cd\nend\n",
      "model M =\n  { A reveal W }\nend\n",
      "model M =\n  A and B then C and D\nend\n",
      "refinement R =\n  A refined to { B hide along cmp2sd }\nend\n",
      "network N = %consistent\n  A, B\nend\n",
  };
  for (const char* text : texts) {
    CAPTURE(text);
    DolFile once = dol_of(text);
    std::string printed = print_dol(once);
    DolFile twice = dol_of(printed);
    CHECK(print_dol(twice) == printed);
  }
}

TEST_CASE("parse errors recover with diagnostics") {
  Diagnostics d;
  parse_dol("model = nonsense\nnetwork N = A end\n", d);
  CHECK(!d.ok());
}

TEST_CASE("models resolve from declarations or view files") {
  Library lib = lib_of(
      "model Both =\n  Ctx and Extra\nend\n"
      "model Talk_cd =\n  Talk hide along sd2cd\nend\n",
      {{"Ctx.cd", kCtx},
       {"Talk.sd", kSd},
       {"Extra.cd", "classdiagram Extra\nclass D { }\n"}});
  Diagnostics d;
  Resolver res(lib, d);
  Theory ctx = res.model("Ctx");
  REQUIRE_MESSAGE(d.ok(), d.str());
  CHECK(ctx.institution == InstitutionId::CD);
  CHECK(ctx.data.find_class("A"));

  Theory talkCd = res.model("Talk_cd");
  REQUIRE_MESSAGE(d.ok(), d.str());
  CHECK(talkCd.institution == InstitutionId::CD);
  REQUIRE(talkCd.hiddenSource);
  CHECK(talkCd.hideMorph == "sd2cd");
  // projected classes carry the interaction's receptions
  REQUIRE(talkCd.data.find_class("A"));
  CHECK(talkCd.data.find_reception("A", "m"));
  CHECK(talkCd.data.find_reception("B", "k"));

  Theory both = res.model("Both");
  REQUIRE_MESSAGE(d.ok(), d.str());
  CHECK(both.data.find_assoc("L"));
  CHECK(both.data.find_class("D"));
  CHECK(both.data.find_class("A"));
}

TEST_CASE("unknown and cyclic references are diagnosed") {
  {
    Library lib = lib_of("model M =\n  Nowhere\nend\n", {});
    Diagnostics d;
    Resolver res(lib, d);
    res.model("M");
    CHECK(!d.ok());
  }
  {
    Library lib = lib_of(
        "model A =\n  B\nend\nmodel B =\n  A\nend\n", {});
    Diagnostics d;
    Resolver res(lib, d);
    res.model("A");
    CHECK(!d.ok());
  }
}

TEST_CASE("object diagrams resolve to typing-only anchored theories") {
  Library lib = lib_of("", {{"Ctx.cd", kCtx},
                            {"Init.od",
                             "objectdiagram Init for Ctx {\n"
                             "  a0 : A { f = true }\n"
                             "}\n"}});
  Diagnostics d;
  Resolver res(lib, d);
  Theory t = res.model("Init");
  REQUIRE_MESSAGE(d.ok(), d.str());
  CHECK(t.institution == InstitutionId::CD);
  CHECK(!t.dataSentences);
  REQUIRE(t.anchors.size() == 1);
  CHECK(t.anchors[0].name == "Init");
  // multiplicities are widened to [0..*] in the typing context
  REQUIRE(t.data.find_assoc("L"));
  CHECK(t.data.find_assoc("L")->a.mult == Mult{0, Mult::kUnbounded});
  CHECK(t.data.invariants.empty());
}

TEST_CASE("reveal keeps only window members") {
  Library lib = lib_of(
      "model Window =\n  Talk hide along sd2cd\nend\n"
      "model Narrow =\n  { Ctx reveal Window }\nend\n",
      {{"Ctx.cd", kCtx}, {"Talk.sd", kSd}});
  Diagnostics d;
  Resolver res(lib, d);
  Theory t = res.model("Narrow");
  REQUIRE_MESSAGE(d.ok(), d.str());
  REQUIRE(t.data.find_class("A"));
  CHECK(t.data.all_attrs("A").empty());       // f hidden by the window
  CHECK(t.data.find_reception("A", "m"));     // reception survives
  CHECK(t.data.find_assoc("L") == nullptr);   // window has no associations
  Theory window = res.model("Window");
  CHECK(t.signature_text() == window.signature_text());
}

TEST_CASE("renames classify into class, attribute, message, and part maps") {
  Library lib = lib_of(
      "model RenCls =\n  Ctx with A |-> AA, A.f |-> g, m |-> mm, L |-> LL\nend\n"
      "model RenLife =\n  Talk with a |-> left\nend\n",
      {{"Ctx.cd", kCtx}, {"Talk.sd", kSd}});
  Diagnostics d;
  Resolver res(lib, d);
  Theory t = res.model("RenCls");
  REQUIRE_MESSAGE(d.ok(), d.str());
  REQUIRE(t.data.find_class("AA"));
  CHECK(t.data.find_class("A") == nullptr);
  auto attrs = t.data.all_attrs("AA");
  REQUIRE(attrs.size() == 1);
  CHECK(attrs[0].name == "g");
  CHECK(t.data.find_reception("AA", "mm"));
  CHECK(t.data.find_assoc("LL"));

  Theory sd = res.model("RenLife");
  REQUIRE_MESSAGE(d.ok(), d.str());
  REQUIRE(sd.interaction);
  CHECK(sd.interaction->find_lifeline("left"));
  CHECK(sd.interaction->find_lifeline("a") == nullptr);
}

TEST_CASE("comorphism translation changes institution, keeps data") {
  Library lib = lib_of(
      "model M =\n  Ctx with translation cd2stm\nend\n",
      {{"Ctx.cd", kCtx}});
  Diagnostics d;
  Resolver res(lib, d);
  Theory t = res.model("M");
  REQUIRE_MESSAGE(d.ok(), d.str());
  CHECK(t.institution == InstitutionId::STM);
  CHECK(t.data.find_class("A"));
  CHECK(t.machines.empty());
}

TEST_CASE("refinements demand equal signatures") {
  Library lib = lib_of(
      "refinement Same =\n  Ctx refined to Ctx\nend\n"
      "refinement Askew =\n  Ctx refined to Talk\nend\n",
      {{"Ctx.cd", kCtx}, {"Talk.sd", kSd}});
  {
    Diagnostics d;
    Resolver res(lib, d);
    auto link = res.refinement("Same");
    REQUIRE(link.has_value());
    CHECK(link->abstractTheory.signature_text() ==
          link->concreteTheory.signature_text());
    CHECK(d.ok());
  }
  {
    Diagnostics d;
    Resolver res(lib, d);
    CHECK(!res.refinement("Askew").has_value());
    CHECK(!d.ok());
  }
}

TEST_CASE("networks classify members and read annotations") {
  Library lib = lib_of(
      "refinement R =\n  Ctx refined to Ctx\nend\n"
      "network N = %consistent\n  Ctx, Talk, R\nend\n"
      "network Bare =\n  Ctx\nend\n",
      {{"Ctx.cd", kCtx}, {"Talk.sd", kSd}});
  Diagnostics d;
  Resolver res(lib, d);
  auto n = res.network("N");
  REQUIRE_MESSAGE(n.has_value(), d.str());
  CHECK(n->expectConsistent);
  CHECK(n->nodes.size() == 2);
  REQUIRE(n->links.size() == 1);
  CHECK(n->links[0].name == "R");
  auto bare = res.network("Bare");
  REQUIRE(bare.has_value());
  CHECK(!bare->expectConsistent);
}

TEST_CASE("resolve_all walks every declaration and exports a stable graph") {
  Library lib = lib_of(
      "model Talk_cd =\n  Talk hide along sd2cd\nend\n"
      "refinement R =\n  { Ctx reveal Talk_cd } refined to Talk_cd\nend\n"
      "network N = %consistent\n  Ctx, Talk, R\nend\n",
      {{"Ctx.cd", kCtx}, {"Talk.sd", kSd}});
  Diagnostics d;
  Resolver res(lib, d);
  ResolvedGraph g = res.resolve_all();
  REQUIRE_MESSAGE(d.ok(), d.str());
  CHECK(g.refinements.size() == 1);
  CHECK(g.networks.size() == 1);
  CHECK(!g.models.empty());
  std::string dot = export_dot(g);
  CHECK(dot == export_dot(g));
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("Talk_cd") != std::string::npos);
  CHECK(dot.find("N") != std::string::npos);
}
