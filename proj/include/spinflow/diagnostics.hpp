#pragma once

// Monitored quantities: spinorial Dirichlet energy, weighted Sobolev norms,
// the energy-identity gap, the conformal-factor evolution residual, and
// nodal-set statistics.

#include <cstdint>
#include <utility>
#include <vector>

#include "spinflow/dirac.hpp"

namespace spinflow {

struct DiagnosticsRow {
  long long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double energy = 0.0;
  double weighted_l2 = 0.0;
  double weighted_h1 = 0.0;
  double min_rho = 0.0;
  double max_rho = 0.0;
  double nodal_fraction = 0.0;
  double resA_l2 = 0.0;
  double resA_linf = 0.0;
  double energy_gap = 0.0;   // centered-window gap, 0 at the series ends
  bool monotone = true;      // energy nonincreasing w.r.t. the previous row
  double dissipation = 0.0;  // 2 int |D^2 psi|^2 rho^dim dV0 (not serialized)
};

// E[psi] = int |D_g psi|^2 rho^dim dV0; clamped rho drives the operator,
// unclamped rho^dim weights the volume.
double energy(const SpinorField& psi, double rho_floor);
double energy_pinned(const ScalarField& rho_clamped, const ScalarField& volume_weight,
                     const SpinorField& psi);

// (int rho^alpha |psi|^2 dV0, int rho^alpha |grad psi|^2 dV0), unclamped rho.
std::pair<double, double> weighted_norms(const SpinorField& psi, double alpha);

// gap at row i: centered dE/dt + dissipation_i; needs 1 <= i <= rows-2.
double energy_identity_gap(const std::vector<DiagnosticsRow>& rows, std::size_t i);

struct ResidualNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

// Residual of the conformal-factor evolution law
//   d(rho^2)/dt = -Lap_g(rho^2) - 2 rho^-2 |grad psi|^2 - (1/2) R_g rho^2
// (nonnegative Laplacian convention), measured pointwise as
//   r = 2<rhs, psi> - predicted
// and reported on the region where the unclamped rho exceeds 10*rho_floor.
ScalarField residual_field(const SpinorField& psi, const SpinorField& rhs_value, double rho_floor);
ResidualNorms appendix_residual(const SpinorField& psi, const SpinorField& rhs_value, double rho_floor);

struct NodalStats {
  std::vector<std::uint8_t> mask;
  double fraction = 0.0;
  int components = 0;
};

// mask of nodes with unclamped rho < threshold; connected components via
// face adjacency on the periodic grid.
NodalStats nodal_stats(const ScalarField& rho, double threshold);

// C(t) = (d/dt weighted_l2 + weighted_h1) / weighted_l2 along a run
// (centered differences inside, one-sided at the ends).
std::vector<double> weighted_c_series(const std::vector<DiagnosticsRow>& rows);

}  // namespace spinflow
