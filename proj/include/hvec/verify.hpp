#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hvec::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// The full oracle suite: module invariants, analytic-vs-dense agreement,
// MC-vs-exhaustive consistency, plus the documented fault-injection
// negatives (dropped phase correction, truncated logical set).
std::vector<CheckResult> run_all_checks(uint64_t seed);

// Prints one pass/fail line per check; returns the number of failures.
int report(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace hvec::verify
