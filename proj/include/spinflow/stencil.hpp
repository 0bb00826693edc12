#pragma once

// Second-order central differences and quadrature on periodic grids. The
// Laplacian convention is NONNEGATIVE throughout: laplacian_flat = -sum d^2/dx^2
// discretized with the compact 3-point stencil; laplacian_wide is the same sign
// built literally as diff_central applied twice (the operator matching the
// square of the flat Dirac operator).

#include <utility>

#include "spinflow/field.hpp"
#include "spinflow/parallel.hpp"

namespace spinflow {

// Calls f(idx, idx_plus, idx_minus) for every node, where idx_plus/minus are
// the periodic neighbors along `axis`.
template <typename F>
void for_axis_neighbors(const Grid& g, int axis, F&& f) {
  const std::size_t nn = g.num_nodes();
  std::size_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= static_cast<std::size_t>(g.n[a]);
  const std::size_t na = static_cast<std::size_t>(g.n[axis]);
  const std::size_t span = stride * na;
  parallel_for(nn, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const std::size_t ia = (idx / stride) % na;
      const std::size_t up = (ia + 1 == na) ? idx + stride - span : idx + stride;
      const std::size_t dn = (ia == 0) ? idx - stride + span : idx - stride;
      f(idx, up, dn);
    }
  });
}

// (f(x+h) - f(x-h)) / 2h, componentwise, periodic wrap.
Field diff_central(const Field& f, int axis);

// Nonnegative compact-stencil Laplacian: -sum_axis (f(+h) - 2f + f(-h)) / h^2.
Field laplacian_flat(const Field& f);

// Nonnegative wide-stencil Laplacian, built as diff_central twice and negated.
Field laplacian_wide(const Field& f);

// Per-axis central differences of a scalar field assembled into grade-1
// components (third component zero in 2D). Periodic wrap assumes smooth
// periodic data; fields with a jump across the seam (e.g. an x-linear
// sawtooth) are outside the contract.
VectorField gradient_flat(const ScalarField& f);

// sum_a W_a d_a f, componentwise (flat directional derivative).
Field directional_derivative(const VectorField& w, const Field& f);

// Rectangle rule: sum of values times the cell volume (pairwise-tree sum).
double integrate(const ScalarField& f);

// integral of weight * <f,g> pointwise (componentwise dot); weight may be null.
double inner_product_l2(const Field& f, const Field& g, const ScalarField* weight = nullptr);

struct Norms {
  double l2 = 0.0;
  double linf = 0.0;
};

// L2 = sqrt(int weight |f|^2 dV0), Linf = max per-node Euclidean magnitude
// (unweighted). Negative weight entries are a usage error.
Norms norms(const Field& f, const ScalarField* weight = nullptr);

// y := y + a*x
void axpy(double a, const Field& x, Field& y);
// out := x + a*y
Field linear_combination(const Field& x, double a, const Field& y);

}  // namespace spinflow
