#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mvcheck/cmp.hpp"
#include "mvcheck/enumerate.hpp"
#include "mvcheck/sd.hpp"
#include "mvcheck/stm.hpp"
#include "mvcheck/ts.hpp"

namespace mvcheck {

// The four member logics of the heterogeneous framework: class diagrams,
// state machines, composite structures, interactions.
enum class InstitutionId { CD, STM, CMP, SD };

std::string institution_name(InstitutionId id);

// A theory: a signature together with sentences, in one institution. The
// representation is syntactic; `sentences()` derives the sentence list.
//  - CD:  data signature; sentences are invariants and multiplicities.
//  - STM: data signature plus machines; machine clauses become sentences.
//  - CMP: additionally a component (structure is part of the signature).
//  - SD:  lifelines/messages; the interaction term is the sentence.
// Anchors (object diagrams) contribute initial-state sentences. A theory
// built by `hide along` keeps its source so realizations can be derived.
struct Theory {
  InstitutionId institution = InstitutionId::CD;
  std::string name;
  ClassModel data;
  bool dataSentences = true;  // object-diagram nodes carry typing only
  std::vector<StateMachine> machines;
  Component component;
  std::shared_ptr<const InteractionModel> interaction;
  bool sdExists = true;  // exists-mode: some trace realizes the interaction
  std::vector<ObjectDiagram> anchors;

  std::shared_ptr<const Theory> hiddenSource;  // pre-projection theory
  std::string hideMorph;                       // name of the morphism used

  std::vector<struct Sentence> sentences() const;
  // Canonical signature rendering: institutions, classes with attribute and
  // reception types, associations without multiplicities, machines, parts,
  // connectors, gates, lifelines, message arities. Equal texts mean equal
  // signatures.
  std::string signature_text() const;
  const StateMachine* find_machine(const std::string& n) const;
};

struct Sentence {
  enum class Kind { Data, Machine, Interaction, Anchor };
  Kind kind = Kind::Data;

  CdSentence data;  // Kind::Data

  // Kind::Machine: one clause of a machine. clause == -1 is the structural
  // clause (initial control; unhandled events are discarded, never fired);
  // clause k >= 0 is transition k's local firing contract.
  std::shared_ptr<const StateMachine> machine;
  int clause = -1;

  std::shared_ptr<const InteractionModel> interaction;  // Kind::Interaction
  bool existsMode = true;

  ObjectDiagram anchor;  // Kind::Anchor

  std::shared_ptr<const ClassModel> ctx;  // typing context for evaluation
  std::string str() const;
};

// A realization: a snapshot transition system (CD, STM, CMP) or a trace set
// (SD).
struct Realization {
  InstitutionId institution = InstitutionId::CD;
  std::shared_ptr<const TransitionSystem> ts;
  TraceSet traces;
};

// Does the realization satisfy the sentence? `exact` (when given) is set to
// false when the verdict leaned on an incompletely explored system or a
// capped product, i.e. it certifies the bounded part only. `why` carries a
// human-readable reason on failure. `witness` receives the matched trace of
// a satisfied exists-mode interaction.
bool satisfies(const Realization& r, const Sentence& s, const Bounds& b,
               bool* exact = nullptr, std::string* why = nullptr,
               Trace* witness = nullptr, long long* productStates = nullptr);

// A signature morphism inside one institution: a bijective renaming of
// classes, attributes, associations, messages, and parts. Unmapped symbols
// stay fixed.
struct SignatureMorphism {
  InstitutionId institution = InstitutionId::CD;
  std::map<std::string, std::string> classMap;
  std::map<std::pair<std::string, std::string>, std::string> attrMap;
  std::map<std::string, std::string> assocMap;
  std::map<std::string, std::string> msgMap;
  std::map<std::string, std::string> partMap;
};

SignatureMorphism inverse(const SignatureMorphism& s);

ClassModel rename_class_model(const ClassModel& m, const SignatureMorphism& s);
// `before` is the model the snapshot is typed against (attribute renaming is
// per-class).
Snapshot rename_snapshot(const Snapshot& sn, const SignatureMorphism& s,
                         const ClassModel& before);
TransitionSystem rename_ts(const TransitionSystem& ts,
                           const SignatureMorphism& s,
                           const ClassModel& before);
StateMachine rename_machine(const StateMachine& sm,
                            const SignatureMorphism& s);
Component rename_component(const Component& c, const SignatureMorphism& s);
InteractionModel rename_interaction(const InteractionModel& sd,
                                    const SignatureMorphism& s);
Theory translate_theory(const Theory& t, const SignatureMorphism& s);

// Sentence translation along the morphism (Sen direction).
Sentence translate_sentence(const Sentence& phi, const SignatureMorphism& s);

// Model reduct against the morphism (Mod direction): the realization over
// the target signature, seen through sigma, i.e. renamed backwards.
// `targetModel` types the realization's snapshots.
Realization reduct(const Realization& r, const SignatureMorphism& s,
                   const ClassModel& targetModel);

// The satisfaction condition instance for (r over target, phi over source):
//   reduct(r, s) |= phi  iff  r |= translate(phi, s).
// Returns true when both sides agree.
bool check_satisfaction_condition(const Realization& r, const Sentence& phi,
                                  const SignatureMorphism& s,
                                  const ClassModel& targetModel,
                                  const Bounds& b);

// Union of two theories of the same institution: classes and associations
// must agree where they overlap; machines, sentences, anchors accumulate;
// components merge part/connector/gate-wise (implicit gating survives only
// when both sides are implicit). Used for `and` and `then`.
Theory merge_theories(const Theory& a, const Theory& b, Diagnostics& diags);

// Re-checks internal well-formedness of an assembled theory (machines
// against data, component against machines, interaction shape).
void validate_theory(const Theory& t, Diagnostics& diags);

}  // namespace mvcheck
