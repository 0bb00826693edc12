#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "spinflow/clifford.hpp"
#include "spinflow/rng.hpp"

using namespace spinflow;

namespace {
Multivector blade(int idx) {
  Multivector m;
  m[idx] = 1.0;
  return m;
}
EvenSpinor random_even(SplitMix64& rng) {
  return {rng.uniform_pm1(), rng.uniform_pm1(), rng.uniform_pm1(), rng.uniform_pm1()};
}
}  // namespace

TEST_CASE("geometric product reproduces the symbolic structure table") {
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      const auto [sign, idx] = oracles::blade_product(a, b);
      Multivector expected;
      expected[idx] = sign;
      CHECK(max_abs(geometric_product(blade(a), blade(b)) - expected) <= 1e-12);
    }
  }
}

TEST_CASE("generator relations") {
  // E1 E1 = 1
  CHECK(geometric_product(blade(1), blade(1)).c0 == 1.0);
  // E1 E2 = E12
  const Multivector e12 = geometric_product(blade(1), blade(2));
  CHECK(e12.c12 == 1.0);
  CHECK(max_abs(e12 - blade(4)) == 0.0);
  // (1 + E12)(1 - E12) = 2, expected value computed with the symbolic oracle
  Multivector p = blade(0) + blade(4);
  Multivector q = blade(0) - blade(4);
  const Multivector expected = oracles::multiply(p, q);
  CHECK(expected.c0 == 2.0);
  CHECK(max_abs(geometric_product(p, q) - expected) <= 1e-12);
}

TEST_CASE("geometric product against the oracle on random multivectors") {
  SplitMix64 rng(2718);
  for (int t = 0; t < 200; ++t) {
    Multivector a, b;
    for (int i = 0; i < 8; ++i) {
      a[i] = rng.uniform_pm1();
      b[i] = rng.uniform_pm1();
    }
    const Multivector got = geometric_product(a, b);
    const Multivector expected = oracles::multiply(a, b);
    CHECK(max_abs(got - expected) <= 1e-12);
  }
}

TEST_CASE("reversion") {
  CHECK(reverse(blade(4)).c12 == -1.0);   // E12 -> -E12
  CHECK(reverse(blade(7)).c123 == -1.0);  // E123 -> -E123
  CHECK(reverse(blade(1)).c1 == 1.0);     // vectors fixed

  SplitMix64 rng(99);
  for (int t = 0; t < 1000; ++t) {
    Multivector a, b;
    for (int i = 0; i < 8; ++i) {
      a[i] = rng.uniform_pm1();
      b[i] = rng.uniform_pm1();
    }
    const Multivector lhs = reverse(geometric_product(a, b));
    const Multivector rhs = geometric_product(reverse(b), reverse(a));
    CHECK(max_abs(lhs - rhs) <= 1e-12 * std::max(1.0, max_abs(lhs)));
    CHECK(max_abs(reverse(reverse(a)) - a) == 0.0);
  }
}

TEST_CASE("grade projection") {
  const Multivector m = blade(0) + blade(1) + blade(4);  // 1 + E1 + E12
  CHECK(max_abs(grade(m, 1) - blade(1)) == 0.0);
  CHECK(max_abs(grade(blade(7), 3) - blade(7)) == 0.0);
  CHECK_THROWS_AS(grade(m, 4), std::invalid_argument);
  CHECK_THROWS_AS(grade(m, -1), std::invalid_argument);

  SplitMix64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    const EvenSpinor p = random_even(rng);
    const Multivector sq = geometric_product(to_multivector(p), reverse(to_multivector(p)));
    const double amp2 = amplitude(p) * amplitude(p);
    CHECK(grade(sq, 0).c0 == doctest::Approx(amp2).epsilon(1e-12));
  }
}

TEST_CASE("amplitude") {
  CHECK(amplitude({1, 0, 0, 0}) == 1.0);
  // 3 * rotor has amplitude 3
  const double th = 0.9;
  const EvenSpinor r = {std::cos(th), 0, std::sin(th), 0};
  CHECK(amplitude(r * 3.0) == doctest::Approx(3.0).epsilon(1e-14));
  // 1 + E12: (1+E12)(1-E12) = 2 by the structure table, so amplitude sqrt(2)
  CHECK(amplitude({1, 1, 0, 0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("polar decomposition") {
  auto [rho2, rot2] = polar_decompose({2, 0, 0, 0});
  CHECK(rho2 == 2.0);
  CHECK(rot2.s == 1.0);

  auto [rho_b, rot_b] = polar_decompose({0, 1, 0, 0});
  CHECK(rho_b == 1.0);
  CHECK(rot_b.b12 == 1.0);

  auto [rho_m, rot_m] = polar_decompose({1, 1, 0, 0});
  CHECK(rho_m == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(rot_m.s == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(is_unit_rotor(rot_m));

  CHECK_THROWS_AS(polar_decompose({0, 0, 0, 0}), std::domain_error);
}

TEST_CASE("sandwich action") {
  // identity spinor fixes vectors
  const Multivector e1 = Multivector::vector(1, 0, 0);
  CHECK(max_abs(sandwich({1, 0, 0, 0}, e1) - e1) == 0.0);

  // rotors rotate: norm preserved to 1e-12, result stays grade 1
  SplitMix64 rng(17);
  for (int t = 0; t < 200; ++t) {
    EvenSpinor p = random_even(rng);
    if (amplitude(p) < 1e-3) continue;
    const Rotor r = polar_decompose(p).rotor;
    const Multivector v = Multivector::vector(rng.uniform_pm1(), rng.uniform_pm1(), rng.uniform_pm1());
    const Multivector s = sandwich(r, v);
    CHECK(max_abs(s - grade(s, 1)) <= 1e-14);
    const double vn = std::sqrt(v.c1 * v.c1 + v.c2 * v.c2 + v.c3 * v.c3);
    const double sn = std::sqrt(s.c1 * s.c1 + s.c2 * s.c2 + s.c3 * s.c3);
    CHECK(sn == doctest::Approx(vn).epsilon(1e-12));
  }

  // degree-2 homogeneity: sandwich(2*1, E1) = 4 E1
  const Multivector s = sandwich({2, 0, 0, 0}, e1);
  CHECK(s.c1 == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("clifford module action") {
  // c(E1) 1 = E23
  const EvenSpinor one{1, 0, 0, 0};
  const EvenSpinor a = clifford_action(1, 0, 0, one);
  CHECK(a.b23 == 1.0);
  CHECK(a.s == 0.0);

  // c(v)^2 = -|v|^2
  SplitMix64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const EvenSpinor p = random_even(rng);
    const double v1 = rng.uniform_pm1(), v2 = rng.uniform_pm1(), v3 = rng.uniform_pm1();
    const double n2 = v1 * v1 + v2 * v2 + v3 * v3;
    const EvenSpinor twice = clifford_action(v1, v2, v3, clifford_action(v1, v2, v3, p));
    const EvenSpinor diff = twice - p * (-n2);
    CHECK(std::abs(diff.s) <= 1e-14);
    CHECK(std::abs(diff.b12) <= 1e-14);
    CHECK(std::abs(diff.b13) <= 1e-14);
    CHECK(std::abs(diff.b23) <= 1e-14);
  }

  // mixed anticommutator vanishes: c(E1)c(E2) + c(E2)c(E1) on 1
  const EvenSpinor mixed = clifford_action(1, 0, 0, clifford_action(0, 1, 0, one)) +
                           clifford_action(0, 1, 0, clifford_action(1, 0, 0, one));
  CHECK(std::abs(mixed.s) + std::abs(mixed.b12) + std::abs(mixed.b13) + std::abs(mixed.b23) == 0.0);

  // same operator through the full algebra: c(v) psi = (E123 v) psi
  for (int t = 0; t < 100; ++t) {
    const EvenSpinor p = random_even(rng);
    const Multivector v = Multivector::vector(rng.uniform_pm1(), rng.uniform_pm1(), rng.uniform_pm1());
    const Multivector lhs = to_multivector(clifford_action(v, p));
    const Multivector rhs = geometric_product(geometric_product(blade(7), v), to_multivector(p));
    CHECK(max_abs(lhs - rhs) <= 1e-14);
  }
}
