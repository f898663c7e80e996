#pragma once

#include <functional>

#include "mvcheck/kernel.hpp"

namespace mvcheck {

// Forgetful translation between institutions, used by `hide along`: theories
// project from source to target (sentences with no target counterpart are
// dropped) and realizations translate the same direction.
struct InstitutionMorphism {
  std::string name;
  InstitutionId from = InstitutionId::SD;
  InstitutionId to = InstitutionId::CD;
  std::function<Theory(const Theory&, Diagnostics&)> project;
  std::function<Realization(const Realization&, const Bounds&)> translate;
};

// Embedding into a richer institution, used by `with translation`: theories
// embed keeping every sentence; realizations of the richer institution
// reduce back to the plainer one.
struct InstitutionComorphism {
  std::string name;
  InstitutionId from = InstitutionId::CD;
  InstitutionId to = InstitutionId::STM;
  std::function<Theory(const Theory&, Diagnostics&)> embed;
  std::function<Realization(const Realization&, const Bounds&)> reduce;
};

struct MorphismRegistry {
  std::map<std::string, InstitutionMorphism> morphisms;
  std::map<std::string, InstitutionComorphism> comorphisms;
  // sd2cd and cmp2sd (morphisms), cd2stm and stm2cmp (comorphisms).
  static const MorphismRegistry& builtin();
};

// The class diagram an interaction induces: one class per lifeline class; a
// message becomes a reception of the receiving lifeline's class, messages
// addressed to the environment a reception of the sender's class. Parameter
// types come from the patterns; positions that stay open are reported.
ClassModel sd2cd_project(const InteractionModel& sd, Diagnostics& diags);

// Prefix tree of the trace set as a transition system over empty snapshots.
TransitionSystem traces_to_prefix_ts(const TraceSet& t);

// A filter that keeps everything that occurs in the system (used to strip
// the machine level without losing data content).
SignatureFilter full_filter_of(const TransitionSystem& ts);

}  // namespace mvcheck
