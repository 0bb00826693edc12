#include "spinflow/stencil.hpp"

#include <cmath>
#include <stdexcept>

namespace spinflow {

Field diff_central(const Field& f, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim) throw std::invalid_argument("diff_central: bad axis");
  Field out(g, f.ncomp());
  const int nc = f.ncomp();
  const double inv2h = 1.0 / (2.0 * g.h[axis]);
  const double* v = f.data();
  double* o = out.data();
  for_axis_neighbors(g, axis, [&](std::size_t idx, std::size_t up, std::size_t dn) {
    for (int c = 0; c < nc; ++c)
      o[idx * nc + c] = (v[up * nc + c] - v[dn * nc + c]) * inv2h;
  });
  return out;
}

Field laplacian_flat(const Field& f) {
  const Grid& g = f.grid();
  Field out(g, f.ncomp());
  const int nc = f.ncomp();
  const double* v = f.data();
  double* o = out.data();
  for (int a = 0; a < g.dim; ++a) {
    const double invh2 = 1.0 / (g.h[a] * g.h[a]);
    for_axis_neighbors(g, a, [&](std::size_t idx, std::size_t up, std::size_t dn) {
      for (int c = 0; c < nc; ++c)
        o[idx * nc + c] -= (v[up * nc + c] - 2.0 * v[idx * nc + c] + v[dn * nc + c]) * invh2;
    });
  }
  return out;
}

Field laplacian_wide(const Field& f) {
  const Grid& g = f.grid();
  Field out(g, f.ncomp());
  for (int a = 0; a < g.dim; ++a) {
    Field dd = diff_central(diff_central(f, a), a);
    const double* v = dd.data();
    double* o = out.data();
    const std::size_t m = out.size();
    parallel_for(m, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) o[i] -= v[i];
    });
  }
  return out;
}

VectorField gradient_flat(const ScalarField& f) {
  const Grid& g = f.grid();
  if (f.ncomp() != 1) throw std::invalid_argument("gradient_flat: scalar field expected");
  VectorField out = make_vector_field(g);
  const double* v = f.data();
  double* o = out.data();
  for (int a = 0; a < g.dim; ++a) {
    const double inv2h = 1.0 / (2.0 * g.h[a]);
    for_axis_neighbors(g, a, [&](std::size_t idx, std::size_t up, std::size_t dn) {
      o[idx * 3 + a] = (v[up] - v[dn]) * inv2h;
    });
  }
  return out;
}

Field directional_derivative(const VectorField& w, const Field& f) {
  const Grid& g = f.grid();
  if (w.ncomp() != 3 || !w.grid().same_shape(g))
    throw std::invalid_argument("directional_derivative: mismatched fields");
  Field out(g, f.ncomp());
  const int nc = f.ncomp();
  const double* v = f.data();
  const double* wv = w.data();
  double* o = out.data();
  for (int a = 0; a < g.dim; ++a) {
    const double inv2h = 1.0 / (2.0 * g.h[a]);
    for_axis_neighbors(g, a, [&](std::size_t idx, std::size_t up, std::size_t dn) {
      const double wa = wv[idx * 3 + a];
      for (int c = 0; c < nc; ++c)
        o[idx * nc + c] += wa * (v[up * nc + c] - v[dn * nc + c]) * inv2h;
    });
  }
  return out;
}

double integrate(const ScalarField& f) {
  if (f.ncomp() != 1) throw std::invalid_argument("integrate: scalar field expected");
  const double* v = f.data();
  const double s = reduce_add(f.size(), [&](std::size_t i) { return v[i]; });
  return s * f.grid().cell_volume();
}

double inner_product_l2(const Field& f, const Field& g, const ScalarField* weight) {
  if (f.ncomp() != g.ncomp() || !f.grid().same_shape(g.grid()))
    throw std::invalid_argument("inner_product_l2: mismatched fields");
  const int nc = f.ncomp();
  const double* a = f.data();
  const double* b = g.data();
  const double* w = weight ? weight->data() : nullptr;
  const double s = reduce_add(f.num_nodes(), [&](std::size_t i) {
    double d = 0.0;
    for (int c = 0; c < nc; ++c) d += a[i * nc + c] * b[i * nc + c];
    return w ? w[i] * d : d;
  });
  return s * f.grid().cell_volume();
}

Norms norms(const Field& f, const ScalarField* weight) {
  const int nc = f.ncomp();
  const double* v = f.data();
  if (weight) {
    if (!weight->grid().same_shape(f.grid()) || weight->ncomp() != 1)
      throw std::invalid_argument("norms: weight shape mismatch");
    const double* w = weight->data();
    const double wmin = reduce_min(weight->size(), [&](std::size_t i) { return w[i]; });
    if (wmin < 0.0) throw std::invalid_argument("norms: weight must be nonnegative");
  }
  Norms out;
  out.l2 = std::sqrt(inner_product_l2(f, f, weight));
  out.linf = std::sqrt(reduce_max(f.num_nodes(), [&](std::size_t i) {
    double d = 0.0;
    for (int c = 0; c < nc; ++c) d += v[i * nc + c] * v[i * nc + c];
    return d;
  }));
  return out;
}

void axpy(double a, const Field& x, Field& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  const double* xv = x.data();
  double* yv = y.data();
  parallel_for(x.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) yv[i] += a * xv[i];
  });
}

Field linear_combination(const Field& x, double a, const Field& y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_combination: size mismatch");
  Field out(x.grid(), x.ncomp());
  const double* xv = x.data();
  const double* yv = y.data();
  double* o = out.data();
  parallel_for(x.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) o[i] = xv[i] + a * yv[i];
  });
  return out;
}

}  // namespace spinflow
