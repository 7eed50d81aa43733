#pragma once

#include <string>
#include <vector>

namespace covsyn {

struct Violation {
  std::string state;
  std::string event;
  std::string rule;
};

/// Empty list means the automaton satisfies every checked rule.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  /// One "rule: state=S event=E" line per violation.
  std::string to_text() const;
};

}  // namespace covsyn
