#pragma once

// Scalar 2D heat-flow model with a closed-form solution, used as the solver's
// convergence oracle and to watch the induced metric determinant u^4 collapse
// while u itself stays smooth and bounded.
//
// Domain [-L, L]^2, periodic; with L >= 6 the Gaussian tails sit below double
// precision for the run horizon, so the wrap is immaterial.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "spinflow/field.hpp"

namespace spinflow {

struct ToyConfig {
  int n = 128;          // nodes per axis
  double half_width = 6.0;  // L; domain [-L, L]^2
  double t_end = 0.5;
  bool dt_fixed_policy = false;
  double dt_fixed = 0.0;
  double cfl_safety = 0.5;
  long long snapshot_every = 0;
  std::string outdir = "out";
};

// u(x, y, t) = (4t+1)^-1 exp(-(x^2+y^2)/(4t+1)); heat evolution of exp(-r^2).
double exact_u(double x, double y, double t);

struct ToyRow {
  long long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double linf_err = 0.0;
  double l2_err = 0.0;
  double mass = 0.0;
  double detg_min = 0.0;
  double detg_max = 0.0;
};

// (min, max) of u^4 over nodes.
std::pair<double, double> detg_monitor(const ScalarField& u);

// x-coordinate of node i in the centered toy frame.
double toy_coord(const ToyConfig& cfg, int i);

ScalarField toy_initial(const ToyConfig& cfg);

struct ToyResult {
  ScalarField u;
  std::vector<ToyRow> rows;
  std::string status;
};

// Integrates du/dt = -Lap0 u (nonnegative-Laplacian convention, i.e. standard
// heat flow) with the shared RK4 kernel, recording per-step error vs exact_u,
// mass, and det g = u^4 extrema.
ToyResult toy_run_in_memory(const ToyConfig& cfg);
ToyResult toy_run_with_callback(const ToyConfig& cfg,
                                const std::function<void(long long, const ScalarField&)>* on_step);

// Same, plus diagnostics.csv / manifest.txt / snapshots under cfg.outdir.
ToyResult toy_run(const ToyConfig& cfg);

}  // namespace spinflow
