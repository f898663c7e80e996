#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mvcheck {

// Classification of a check or a diagnostic: what kind of property was
// examined (syntax vs. meaning) and at what level of the model it lives.
enum class CheckNature { Syntactic, Semantic };
enum class CheckScope { Structural, Behavioural };
enum class CheckDirection { Horizontal, Vertical };

const char* to_string(CheckNature n);
const char* to_string(CheckScope s);
const char* to_string(CheckDirection d);

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  int line = 0;  // 1-based; 0 = no position
  int col = 0;
  std::string message;
  CheckNature nature = CheckNature::Syntactic;
  CheckScope scope = CheckScope::Structural;

  std::string str() const;
};

struct Diagnostics {
  std::vector<Diagnostic> items;

  void error(int line, int col, std::string msg,
             CheckNature n = CheckNature::Syntactic,
             CheckScope s = CheckScope::Structural) {
    items.push_back({Severity::Error, line, col, std::move(msg), n, s});
  }
  void warning(int line, int col, std::string msg,
               CheckNature n = CheckNature::Syntactic,
               CheckScope s = CheckScope::Structural) {
    items.push_back({Severity::Warning, line, col, std::move(msg), n, s});
  }
  bool ok() const {
    for (const auto& d : items)
      if (d.severity == Severity::Error) return false;
    return true;
  }
  std::string str() const;
  void append(const Diagnostics& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
  }
};

// Thrown by kernel-level operations whose preconditions are violated
// (institution mismatch, unresolved symbol, non-injective map, ...).
struct KernelError : std::runtime_error {
  explicit KernelError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mvcheck
