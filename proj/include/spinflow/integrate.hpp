#pragma once

// Classical RK4 over Field states. The spinor flow and the scalar toy model
// both step through this kernel so their time integration cannot drift apart.

#include "spinflow/stencil.hpp"

namespace spinflow {

template <typename Rhs>
Field rk4_step(const Field& y, double dt, Rhs&& f) {
  const Field k1 = f(y);
  const Field k2 = f(linear_combination(y, 0.5 * dt, k1));
  const Field k3 = f(linear_combination(y, 0.5 * dt, k2));
  const Field k4 = f(linear_combination(y, dt, k3));

  Field out(y.grid(), y.ncomp());
  const double w = dt / 6.0;
  const double* p = y.data();
  const double* a = k1.data();
  const double* b = k2.data();
  const double* c = k3.data();
  const double* d = k4.data();
  double* o = out.data();
  parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      o[i] = p[i] + w * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
  });
  return out;
}

// Index of the first non-finite entry, or size() if all finite.
inline std::size_t first_non_finite(const Field& f) {
  const double* v = f.data();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(v[i])) return i;
  return f.size();
}

}  // namespace spinflow
