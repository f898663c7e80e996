#pragma once

#include "mvcheck/cd.hpp"

namespace mvcheck {

// Transition effect: `attr := expr` or `send target.msg(args)` where target
// is an association role navigable from the context class, or `env`.
struct Effect {
  enum class Kind { Assign, Send };
  Kind kind = Kind::Assign;
  std::string attr;   // Assign
  ExprPtr value;      // Assign
  std::string target;  // Send: role name or "env"
  std::string message;
  std::vector<ExprPtr> args;
  int line = 0;
  std::string str() const;
};

struct MachineTransition {
  std::string src;
  std::string dst;
  std::string trigger;              // reception of the context class
  std::vector<std::string> params;  // formals bound from event arguments
  ExprPtr guard;                    // null means true
  std::vector<Effect> effects;
  int line = 0;
  std::string str() const;
};

// Flat state machine over one context class.
struct StateMachine {
  std::string name;
  std::string contextClass;
  std::vector<std::string> states;
  std::string initial;
  std::vector<MachineTransition> transitions;
  int line = 0;
  bool empty() const { return name.empty(); }
};

StateMachine parse_stm(const std::string& text, Diagnostics& diags);

// Associations through which an object of class `cls` can send under role
// name `role`: pairs of (association, cls-side-is-end-a).
std::vector<std::pair<const AssocDef*, bool>> roles_from(
    const ClassModel& m, const std::string& cls, const std::string& role);

// Checks the machine against its context class diagram: declared states,
// triggers are receptions with matching arity, guards and effects type-check,
// send targets resolve to roles or env, sent messages are receptions of the
// possible receiver classes.
void wellformed_stm(const StateMachine& sm, const ClassModel& m,
                    Diagnostics& diags);

// One textual sentence per clause: the initial-state clause plus each
// transition clause, in declaration order.
std::vector<std::string> stm_sentences(const StateMachine& sm);

}  // namespace mvcheck
