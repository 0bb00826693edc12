#pragma once

// Named property checks: per-module invariant suites plus the acceptance
// criteria. Each check returns pass/fail with a measured detail string; the
// runner prints one line per check and reports the failure count.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinflow/clifford.hpp"

namespace spinflow {

struct CheckResult {
  std::string group;
  std::string name;
  bool pass = true;
  std::string detail;
  double seconds = 0.0;
};

struct Check {
  std::string group;
  std::string name;
  std::function<CheckResult()> fn;
};

// All registered checks, module groups first, acceptance criteria last.
const std::vector<Check>& all_checks();

// filter: "" = everything; "group:<g>"; "name:<n>"; acceptance criteria live in
// group "acceptance" with names starting at "01_". Returns the failure count.
int run_checks(const std::string& filter, std::ostream& os);

// Anticommutator check parameterized on the product, so a deliberately broken
// multiply can be shown to fail by name.
using MultiplyFn = std::function<Multivector(const Multivector&, const Multivector&)>;
CheckResult check_clifford_anticommutators(const MultiplyFn& multiply);

}  // namespace spinflow
