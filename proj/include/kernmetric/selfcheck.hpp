#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kernmetric {

struct InvariantOutcome {
  std::string name;
  bool passed;
  std::string detail;
};

// Runs the built-in invariant suite over every module at desk scale.
// inject_fault corrupts one check on purpose so callers can verify that
// failures propagate.
std::vector<InvariantOutcome> run_invariants(bool inject_fault = false);

// Prints one PASS/FAIL line per invariant; returns the failure count.
int print_selfcheck(std::ostream& out, bool inject_fault = false);

}  // namespace kernmetric
