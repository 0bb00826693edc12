#include <doctest.h>

#include <sstream>

#include "spinflow/parallel.hpp"
#include "spinflow/verify.hpp"

using namespace spinflow;

TEST_CASE("a flipped product sign fails the anticommutator check by name") {
  // mutation fixture: E2 E1 gets the wrong sign
  const MultiplyFn broken = [](const Multivector& a, const Multivector& b) {
    Multivector r = geometric_product(a, b);
    r.c12 = a.c0 * b.c12 + a.c12 * b.c0 + a.c1 * b.c2 + a.c2 * b.c1  // sign flipped here
            + a.c3 * b.c123 + a.c123 * b.c3 - a.c13 * b.c23 + a.c23 * b.c13;
    return r;
  };
  const CheckResult bad = check_clifford_anticommutators(broken);
  CHECK_FALSE(bad.pass);
  CHECK(bad.detail.find("anticommutator") != std::string::npos);

  const CheckResult good = check_clifford_anticommutators(
      [](const Multivector& a, const Multivector& b) { return geometric_product(a, b); });
  CHECK(good.pass);
}

TEST_CASE("verification report is independent of the thread count") {
  const int saved = max_threads();
  std::ostringstream rep1, rep8;
  set_max_threads(1);
  const int f1 = run_checks("group:clifford", rep1);
  set_max_threads(8);
  const int f8 = run_checks("group:clifford", rep8);
  set_max_threads(saved);
  CHECK(f1 == 0);
  CHECK(f8 == 0);
  // strip per-check timings before comparing
  auto strip = [](std::string s) {
    std::string out;
    bool in_paren = false;
    for (char c : s) {
      if (c == '(') in_paren = true;
      if (!in_paren) out += c;
      if (c == ')') in_paren = false;
    }
    return out;
  };
  CHECK(strip(rep1.str()) == strip(rep8.str()));
}

TEST_CASE("check registry covers every module group and all criteria") {
  int acceptance = 0;
  bool clifford = false, fieldgrid = false, dirac = false, flow = false, diagnostics = false,
       toy2d = false, shell = false;
  for (const Check& c : all_checks()) {
    if (c.group == "acceptance") ++acceptance;
    clifford |= c.group == "clifford";
    fieldgrid |= c.group == "fieldgrid";
    dirac |= c.group == "dirac";
    flow |= c.group == "flow";
    diagnostics |= c.group == "diagnostics";
    toy2d |= c.group == "toy2d";
    shell |= c.group == "shell";
  }
  CHECK(acceptance == 11);
  CHECK(clifford);
  CHECK(fieldgrid);
  CHECK(dirac);
  CHECK(flow);
  CHECK(diagnostics);
  CHECK(toy2d);
  CHECK(shell);
}
