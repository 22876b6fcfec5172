#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tomosc::verify {

/// One invariant check. `require_at_most` distinguishes error bounds
/// (measured <= threshold) from negative controls (measured >= threshold).
struct CheckResult {
  std::string module;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool require_at_most = true;
  bool pass = false;
  std::string note;
};

struct Options {
  bool fast = false;  // reduced grids and sample counts, tolerances x10
};

/// Run the invariant suites of all modules.
std::vector<CheckResult> run_all(const Options& options);

bool all_passed(const std::vector<CheckResult>& results);

/// Fixed-width pass/fail table with worst-case errors.
void print_report(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace tomosc::verify
