#pragma once

// Real Clifford algebra Cl(3) over the basis {1, E1, E2, E3, E12, E13, E23, E123}
// with E_i E_j + E_j E_i = 2 delta_ij, and the even-grade spinors (scalar +
// bivector) that carry the flow. Vectors act on even spinors through
// c(v) psi = (E123 v) psi, which is closed on the even subalgebra and squares
// to -|v|^2.

#include <array>
#include <cmath>

namespace spinflow {

struct Multivector {
  double c0 = 0.0;                          // scalar
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;      // E1, E2, E3
  double c12 = 0.0, c13 = 0.0, c23 = 0.0;   // E12, E13, E23
  double c123 = 0.0;                        // E123

  static Multivector scalar(double s) { return {s, 0, 0, 0, 0, 0, 0, 0}; }
  static Multivector vector(double x, double y, double z) { return {0, x, y, z, 0, 0, 0, 0}; }

  double& operator[](int i) { return (&c0)[i]; }
  double operator[](int i) const { return (&c0)[i]; }

  Multivector operator+(const Multivector& o) const {
    return {c0 + o.c0, c1 + o.c1, c2 + o.c2, c3 + o.c3,
            c12 + o.c12, c13 + o.c13, c23 + o.c23, c123 + o.c123};
  }
  Multivector operator-(const Multivector& o) const {
    return {c0 - o.c0, c1 - o.c1, c2 - o.c2, c3 - o.c3,
            c12 - o.c12, c13 - o.c13, c23 - o.c23, c123 - o.c123};
  }
  Multivector operator*(double a) const {
    return {a * c0, a * c1, a * c2, a * c3, a * c12, a * c13, a * c23, a * c123};
  }
};

// Full geometric product, expanded from the defining relations.
Multivector geometric_product(const Multivector& a, const Multivector& b);

// Reversion: grades 0 and 1 fixed, grades 2 and 3 negated.
Multivector reverse(const Multivector& a);

// Grade projection, k in 0..3; out-of-range k is a usage error.
Multivector grade(const Multivector& a, int k);

double max_abs(const Multivector& a);

struct EvenSpinor {
  double s = 0.0;
  double b12 = 0.0, b13 = 0.0, b23 = 0.0;

  static EvenSpinor identity() { return {1.0, 0.0, 0.0, 0.0}; }

  EvenSpinor operator+(const EvenSpinor& o) const { return {s + o.s, b12 + o.b12, b13 + o.b13, b23 + o.b23}; }
  EvenSpinor operator-(const EvenSpinor& o) const { return {s - o.s, b12 - o.b12, b13 - o.b13, b23 - o.b23}; }
  EvenSpinor operator*(double a) const { return {a * s, a * b12, a * b13, a * b23}; }
};

// Rotors are unit-amplitude even spinors (R reverse(R) = 1).
using Rotor = EvenSpinor;

inline Multivector to_multivector(const EvenSpinor& p) {
  return {p.s, 0, 0, 0, p.b12, p.b13, p.b23, 0};
}

// Product restricted to the even subalgebra (closed).
inline EvenSpinor even_product(const EvenSpinor& a, const EvenSpinor& b) {
  return {a.s * b.s - a.b12 * b.b12 - a.b13 * b.b13 - a.b23 * b.b23,
          a.s * b.b12 + a.b12 * b.s - a.b13 * b.b23 + a.b23 * b.b13,
          a.s * b.b13 + a.b13 * b.s + a.b12 * b.b23 - a.b23 * b.b12,
          a.s * b.b23 + a.b23 * b.s - a.b12 * b.b13 + a.b13 * b.b12};
}

inline EvenSpinor reverse(const EvenSpinor& a) { return {a.s, -a.b12, -a.b13, -a.b23}; }

// rho = sqrt(s^2 + b12^2 + b13^2 + b23^2); equals the scalar part of psi reverse(psi).
inline double amplitude(const EvenSpinor& p) {
  return std::sqrt(p.s * p.s + p.b12 * p.b12 + p.b13 * p.b13 + p.b23 * p.b23);
}

inline bool is_unit_rotor(const EvenSpinor& r, double tol = 1e-12) {
  return std::abs(amplitude(r) - 1.0) <= tol;
}

// psi = rho R with amplitude(R) = 1; throws std::domain_error at zero amplitude.
struct PolarDecomposition {
  double rho;
  Rotor rotor;
};
PolarDecomposition polar_decompose(const EvenSpinor& p);

// psi v reverse(psi) for a grade-1 v; grade-1 result with norm amplitude(psi)^2 |v|.
Multivector sandwich(const EvenSpinor& p, const Multivector& v);

// c(v) psi = (E123 v) psi, left multiplication by the bivector dual to v.
// Anticommutation: c(v) c(w) + c(w) c(v) = -2 <v,w> id.
inline EvenSpinor clifford_action(double v1, double v2, double v3, const EvenSpinor& p) {
  return {-v3 * p.b12 + v2 * p.b13 - v1 * p.b23,
          v3 * p.s + v1 * p.b13 + v2 * p.b23,
          -v2 * p.s - v1 * p.b12 + v3 * p.b23,
          v1 * p.s - v2 * p.b12 - v3 * p.b13};
}

inline EvenSpinor clifford_action(const Multivector& v, const EvenSpinor& p) {
  return clifford_action(v.c1, v.c2, v.c3, p);
}

// Axis actions c(E1), c(E2), c(E3) as component shuffles, for stencil kernels.
// c(E1): (s,b12,b13,b23) -> (-b23,  b13, -b12,  s)
// c(E2): (s,b12,b13,b23) -> ( b13,  b23, -s,   -b12)
// c(E3): (s,b12,b13,b23) -> (-b12,  s,    b23, -b13)
inline void axis_action_accumulate(int axis, const double d[4], double out[4]) {
  switch (axis) {
    case 0:
      out[0] -= d[3]; out[1] += d[2]; out[2] -= d[1]; out[3] += d[0];
      break;
    case 1:
      out[0] += d[2]; out[1] += d[3]; out[2] -= d[0]; out[3] -= d[1];
      break;
    default:
      out[0] -= d[1]; out[1] += d[0]; out[2] += d[3]; out[3] -= d[2];
      break;
  }
}

}  // namespace spinflow
