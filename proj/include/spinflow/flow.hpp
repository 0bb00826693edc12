#pragma once

// Explicit RK4 integration of the regularized spinorial heat flow
//   dpsi/dt = -D_{g(psi)}^2 psi - eps*Lap0 psi [+ directional gauge term]
// with CFL control driven by the clamped diffusion coefficient rho^-2.

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinflow/diagnostics.hpp"
#include "spinflow/dirac.hpp"

namespace spinflow {

enum class Preset { Constant, GaussianBump, NodalRing, RandomSmooth };
enum class DtPolicy { Fixed, Cfl };

Preset preset_from_name(const std::string& name);  // throws on unknown preset
std::string preset_name(Preset p);

struct FlowConfig {
  int dim = 2;
  std::array<int, 3> n = {64, 64, 1};
  std::array<double, 3> length = {4.0, 4.0, 1.0};
  double t_end = 0.1;
  DtPolicy dt_policy = DtPolicy::Cfl;
  double dt_fixed = 0.0;
  double cfl_safety = 0.5;
  double epsilon = 0.0;
  double rho_floor = kDefaultRhoFloor;
  bool gauge = false;
  double alpha = 2.0;
  Preset init = Preset::Constant;
  double init_r0 = 1.0;
  double init_amp = 1.0;
  std::uint64_t seed = 12345;
  long long snapshot_every = 0;
  std::string outdir = "out";

  Grid make_grid() const;
};

// Attempted update produced a non-finite value.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long long step, std::size_t node);
  long long step;
  std::size_t node;
};

// Presets: constant amp*1; gaussian_bump amp*exp(-r^2)*1; nodal_ring
// amp*(r^2-r0^2)exp(-r^2)*1 (r from the domain center); random_smooth, a
// seeded low-frequency trigonometric polynomial per component around 1.
SpinorField initial_data(Preset preset, const Grid& grid, std::uint64_t seed, double r0, double amp);
SpinorField initial_data(const FlowConfig& cfg);

struct RhsParts {
  SpinorField dirac_once;  // D_g psi (conformal form A)
  SpinorField dirac_sq;    // D_g^2 psi
  SpinorField total;       // full right-hand side
};

// pinned, when non-null, freezes the metric factor (clamped rho) instead of
// recomputing it from psi.
RhsParts rhs_parts(const SpinorField& psi, const FlowConfig& cfg, const ScalarField* pinned = nullptr);
SpinorField rhs(const SpinorField& psi, const FlowConfig& cfg, const ScalarField* pinned = nullptr);

// dt = safety * min(h^2) / (2 dim (rho_min^-2 + eps)), rho_min the clamped
// minimum. Stable for the explicit scheme's principal part.
double cfl_dt(double min_rho_clamped, const FlowConfig& cfg);
double cfl_dt(const SpinorField& psi, const FlowConfig& cfg);

struct FlowState {
  double t = 0.0;
  long long step = 0;
  SpinorField psi;
};

// One RK4 step; throws DivergenceError if the update goes non-finite.
FlowState step(const FlowState& s, double dt, const FlowConfig& cfg, const ScalarField* pinned = nullptr);

struct RunResult {
  FlowState final_state;
  std::vector<DiagnosticsRow> rows;
  std::string status;  // completed | diverged(step=N) | floor-dominated
  double sup_weighted_c = 0.0;
};

// Integrates to t_end, emitting a diagnostics row every step and snapshots
// every snapshot_every steps into cfg.outdir (diagnostics.csv, manifest.txt,
// snap_<step>.sghf). Deterministic for fixed (config, seed).
RunResult run(const FlowConfig& cfg);

// Same loop without touching the filesystem (rows only).
RunResult run_in_memory(const FlowConfig& cfg, const ScalarField* pinned = nullptr);

// Core loop; on_step (optional) fires after the initial state and each step.
RunResult run_with_callback(const FlowConfig& cfg, const ScalarField* pinned,
                            const std::function<void(const FlowState&)>* on_step);

}  // namespace spinflow
