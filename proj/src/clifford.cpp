#include "spinflow/clifford.hpp"

#include <algorithm>
#include <stdexcept>

namespace spinflow {

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  Multivector r;
  r.c0 = a.c0 * b.c0 + a.c1 * b.c1 + a.c2 * b.c2 + a.c3 * b.c3
       - a.c12 * b.c12 - a.c13 * b.c13 - a.c23 * b.c23 - a.c123 * b.c123;
  r.c1 = a.c0 * b.c1 + a.c1 * b.c0 - a.c2 * b.c12 - a.c3 * b.c13
       + a.c12 * b.c2 + a.c13 * b.c3 - a.c23 * b.c123 - a.c123 * b.c23;
  r.c2 = a.c0 * b.c2 + a.c2 * b.c0 + a.c1 * b.c12 - a.c3 * b.c23
       - a.c12 * b.c1 + a.c13 * b.c123 + a.c23 * b.c3 + a.c123 * b.c13;
  r.c3 = a.c0 * b.c3 + a.c3 * b.c0 + a.c1 * b.c13 + a.c2 * b.c23
       - a.c13 * b.c1 - a.c23 * b.c2 - a.c12 * b.c123 - a.c123 * b.c12;
  r.c12 = a.c0 * b.c12 + a.c12 * b.c0 + a.c1 * b.c2 - a.c2 * b.c1
        + a.c3 * b.c123 + a.c123 * b.c3 - a.c13 * b.c23 + a.c23 * b.c13;
  r.c13 = a.c0 * b.c13 + a.c13 * b.c0 + a.c1 * b.c3 - a.c3 * b.c1
        - a.c2 * b.c123 - a.c123 * b.c2 + a.c12 * b.c23 - a.c23 * b.c12;
  r.c23 = a.c0 * b.c23 + a.c23 * b.c0 + a.c2 * b.c3 - a.c3 * b.c2
        + a.c1 * b.c123 + a.c123 * b.c1 - a.c12 * b.c13 + a.c13 * b.c12;
  r.c123 = a.c0 * b.c123 + a.c123 * b.c0 + a.c1 * b.c23 + a.c23 * b.c1
         - a.c2 * b.c13 - a.c13 * b.c2 + a.c3 * b.c12 + a.c12 * b.c3;
  return r;
}

Multivector reverse(const Multivector& a) {
  return {a.c0, a.c1, a.c2, a.c3, -a.c12, -a.c13, -a.c23, -a.c123};
}

Multivector grade(const Multivector& a, int k) {
  if (k < 0 || k > 3) throw std::invalid_argument("grade: k must be in 0..3");
  Multivector r;
  switch (k) {
    case 0: r.c0 = a.c0; break;
    case 1: r.c1 = a.c1; r.c2 = a.c2; r.c3 = a.c3; break;
    case 2: r.c12 = a.c12; r.c13 = a.c13; r.c23 = a.c23; break;
    default: r.c123 = a.c123; break;
  }
  return r;
}

double max_abs(const Multivector& a) {
  double m = 0.0;
  for (int i = 0; i < 8; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

PolarDecomposition polar_decompose(const EvenSpinor& p) {
  const double rho = amplitude(p);
  if (rho == 0.0) throw std::domain_error("polar_decompose: zero amplitude (nodal point)");
  return {rho, p * (1.0 / rho)};
}

Multivector sandwich(const EvenSpinor& p, const Multivector& v) {
  const Multivector m = to_multivector(p);
  return geometric_product(geometric_product(m, v), reverse(m));
}

}  // namespace spinflow
