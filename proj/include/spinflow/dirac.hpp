#pragma once

// Flat-background and conformal Dirac operators on periodic grids, plus the
// conformal geometry derived from a spinor field: rho, log rho, grad rho,
// scalar curvature of g = rho^2 g0, and the volume weight rho^dim.
//
// Every division by rho uses the clamped field max(rho, rho_floor); the
// unclamped rho is kept for diagnostics and volume weights.

#include "spinflow/field.hpp"
#include "spinflow/stencil.hpp"

namespace spinflow {

inline constexpr double kDefaultRhoFloor = 1e-6;

// Pointwise amplitude of a spinor field.
ScalarField conformal_factor(const SpinorField& psi);

// max(rho, floor) pointwise.
ScalarField clamp_floor(const ScalarField& rho, double floor);

struct ConformalGeometry {
  ScalarField rho;             // unclamped amplitude
  ScalarField rho_clamped;     // max(rho, rho_floor)
  ScalarField log_rho;         // log of the clamped field
  VectorField grad_rho;        // gradient of the clamped field
  ScalarField volume_weight;   // unclamped rho^dim
  double rho_floor = kDefaultRhoFloor;

  double min_rho() const;      // unclamped extrema
  double max_rho() const;
};

ConformalGeometry make_geometry(const SpinorField& psi, double rho_floor);
ConformalGeometry make_geometry_from_rho(const ScalarField& rho, double rho_floor);

// D0 phi = sum_k c(E_k) d_k phi over the grid's axes.
SpinorField dirac_flat(const SpinorField& phi);

enum class ConformalForm { A, B };

// Conformal Dirac operator for g = rho^2 g0, rho clamped:
//   form A: rho^-2 D0(rho phi)
//   form B: rho^-1 D0 phi + rho^-2 c(grad rho) phi
// The two agree to O(h^2) for smooth data.
SpinorField dirac_conformal(const ScalarField& rho_clamped, const SpinorField& phi, ConformalForm form);
SpinorField dirac_conformal(const SpinorField& psi_metric, const SpinorField& phi, ConformalForm form,
                            double rho_floor);

// D_{g(psi)}(D_{g(psi)} psi): form A composed twice with the metric frozen from
// the argument at call time.
SpinorField dirac_squared(const SpinorField& psi, double rho_floor);
// Same composition with an externally pinned (clamped) metric factor.
SpinorField dirac_squared_pinned(const ScalarField& rho_clamped, const SpinorField& phi);

// Scalar curvature of g = rho^2 g0 on a flat background, nonnegative-Laplacian
// convention: dim 3: rho^-2 (4 Lap0 log rho - 2 |grad log rho|^2);
// dim 2: 2 rho^-2 Lap0 log rho.
ScalarField scalar_curvature(const ScalarField& rho, double rho_floor);

// Nonnegative conformal scalar Laplacian, dim 3:
//   rho^-2 (Lap0 f - <grad log rho, grad f>)
// (dim 2: rho^-2 Lap0 f; the drift vanishes since sqrt(det g) g^ij is flat).
ScalarField conformal_laplacian_scalar(const ScalarField& rho, const ScalarField& f, double rho_floor);

// Induced frame e_k = rho R E_k reverse(R); throws std::domain_error at nodal
// points (zero amplitude).
VectorField frame(const SpinorField& psi, int k);

}  // namespace spinflow
