#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spinflow/flow.hpp"
#include "spinflow/integrate.hpp"
#include "spinflow/rng.hpp"
#include "spinflow/toy2d.hpp"

using namespace spinflow;

namespace {

double max_diff(const Field& a, const Field& b) {
  return norms(linear_combination(a, -1.0, b)).linf;
}

}  // namespace

TEST_CASE("initial data presets") {
  FlowConfig cfg;
  cfg.dim = 2;
  cfg.n = {64, 64, 1};
  cfg.length = {12.0, 12.0, 1.0};

  SUBCASE("constant") {
    cfg.init = Preset::Constant;
    cfg.init_amp = 1.0;
    const SpinorField psi = initial_data(cfg);
    CHECK(norms(conformal_factor(psi)).linf == 1.0);
    CHECK(norms(dirac_flat(psi)).linf == 0.0);
  }

  SUBCASE("gaussian bump") {
    cfg.init = Preset::GaussianBump;
    const SpinorField psi = initial_data(cfg);
    const Grid g = cfg.make_grid();
    CHECK(psi.at(g.index(32, 32), 0) == doctest::Approx(1.0).epsilon(1e-14));  // center node
    CHECK(psi.at(g.index(0, 0), 0) <= std::exp(-36.0));                        // corner of [-6,6]^2
  }

  SUBCASE("nodal ring vanishes near r = r0") {
    cfg.init = Preset::NodalRing;
    cfg.init_r0 = 1.0;
    const SpinorField psi = initial_data(cfg);
    const ScalarField rho = conformal_factor(psi);
    // some node within h of the ring, so min rho <= h * max|grad rho|
    const double h = cfg.make_grid().h[0];
    double min_near_ring = 1e300;
    const Grid g = cfg.make_grid();
    for (int j = 0; j < 64; ++j)
      for (int i = 0; i < 64; ++i) {
        const double x = g.coord(i, 0) - 6.0, y = g.coord(j, 1) - 6.0;
        if (std::abs(std::sqrt(x * x + y * y) - 1.0) < h)
          min_near_ring = std::min(min_near_ring, rho[g.index(i, j)]);
      }
    const VectorField grad = gradient_flat(rho);
    CHECK(min_near_ring <= h * norms(grad).linf);
  }

  SUBCASE("random smooth is seeded and deterministic") {
    cfg.init = Preset::RandomSmooth;
    cfg.seed = 42;
    const SpinorField a = initial_data(cfg);
    const SpinorField b = initial_data(cfg);
    CHECK(max_diff(a, b) == 0.0);
    cfg.seed = 43;
    const SpinorField c = initial_data(cfg);
    CHECK(max_diff(a, c) > 0.0);
    CHECK(norms(conformal_factor(c)).linf < 2.0);  // stays near 1
  }

  SUBCASE("unknown preset name") {
    CHECK_THROWS_AS(preset_from_name("gausian"), std::invalid_argument);
  }
}

TEST_CASE("rhs structure") {
  FlowConfig cfg;
  cfg.dim = 2;
  cfg.n = {32, 32, 1};
  cfg.length = {1.0, 1.0, 1.0};

  // constant psi: every term vanishes exactly
  cfg.init = Preset::Constant;
  const SpinorField c = initial_data(cfg);
  cfg.epsilon = 0.4;
  cfg.gauge = true;
  CHECK(norms(rhs(c, cfg)).linf == 0.0);
  cfg.epsilon = 0.0;
  cfg.gauge = false;

  // with rho pinned to 1 the rhs is minus the wide-stencil Laplacian
  const Grid g = cfg.make_grid();
  ScalarField one = make_scalar_field(g);
  for (std::size_t i = 0; i < one.size(); ++i) one[i] = 1.0;
  SpinorField mode = make_spinor_field(g);
  const double k = 2.0 * M_PI;
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i)
      mode.set_spinor(g.index(i, j), {std::sin(k * g.coord(i, 0)), 0.5, 0, 0});
  Field neg_wide = laplacian_wide(mode);
  for (std::size_t i = 0; i < neg_wide.size(); ++i) neg_wide[i] = -neg_wide[i];
  CHECK(max_diff(rhs(mode, cfg, &one), neg_wide) == 0.0);

  // epsilon adds the compact-stencil decay rate on a Fourier mode
  cfg.epsilon = 0.3;
  const SpinorField r = rhs(mode, cfg, &one);
  const double lam_w = oracles::lambda_wide(k, g.h[0]);
  const double lam_c = oracles::lambda_compact(k, g.h[0]);
  for (int i = 0; i < 32; ++i) {
    const double expected = -(lam_w + cfg.epsilon * lam_c) * std::sin(k * g.coord(i, 0));
    CHECK(r.at(g.index(i, 3), 0) == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("cfl step size") {
  FlowConfig cfg;
  cfg.dim = 2;
  cfg.n = {10, 10, 1};
  cfg.length = {1.0, 1.0, 1.0};
  cfg.cfl_safety = 0.5;
  CHECK(cfl_dt(1.0, cfg) == doctest::Approx(1.25e-3).epsilon(1e-14));
  CHECK(cfl_dt(0.1, cfg) == doctest::Approx(1.25e-5).epsilon(1e-14));

  // epsilon enters the denominator
  cfg.epsilon = 3.0;
  CHECK(cfl_dt(1.0, cfg) == doctest::Approx(0.5 * 0.01 / (4.0 * 4.0)).epsilon(1e-14));

  // the step never exceeds the explicit stability bound of the clamped
  // principal part: dt * lambda_max stays below the RK4 real-axis limit
  SplitMix64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const double rho_min = std::pow(10.0, -4.0 * rng.uniform01());
    cfg.epsilon = rng.uniform01();
    cfg.cfl_safety = 0.05 + 0.95 * rng.uniform01();
    const double h = cfg.make_grid().min_h();
    const double lambda_max =
        (1.0 / (rho_min * rho_min)) * cfg.dim / (h * h) + cfg.epsilon * 4.0 * cfg.dim / (h * h);
    CHECK(cfl_dt(rho_min, cfg) * lambda_max <= 2.785);
  }
}

TEST_CASE("rk4 step") {
  FlowConfig cfg;
  cfg.dim = 2;
  cfg.n = {32, 32, 1};
  cfg.length = {1.0, 1.0, 1.0};
  cfg.init = Preset::Constant;
  cfg.init_amp = 2.0;

  // constant state: unchanged except t
  FlowState st;
  st.psi = initial_data(cfg);
  const FlowState st2 = step(st, 1e-3, cfg);
  CHECK(st2.t == 1e-3);
  CHECK(st2.step == 1);
  CHECK(max_diff(st2.psi, st.psi) <= 1e-14);

  // single mode with pinned metric matches the scalar RK4 amplification
  const Grid g = cfg.make_grid();
  ScalarField one = make_scalar_field(g);
  for (std::size_t i = 0; i < one.size(); ++i) one[i] = 1.0;
  const double k = 2.0 * M_PI;
  FlowState m;
  m.psi = make_spinor_field(g);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i)
      m.psi.set_spinor(g.index(i, j), {std::sin(k * g.coord(i, 0)), 0, 0, 0});
  const double n0 = norms(m.psi).l2;
  const double dt = 1e-3;
  const FlowState m1 = step(m, dt, cfg, &one);
  const double growth = oracles::rk4_growth(oracles::lambda_wide(k, g.h[0]), dt);
  CHECK(norms(m1.psi).l2 / n0 == doctest::Approx(growth).epsilon(1e-10));
}

TEST_CASE("toy stepper equals the shared integrator on the heat rhs") {
  ToyConfig cfg;
  cfg.n = 32;
  cfg.half_width = 6.0;
  cfg.t_end = 0.02;
  const ToyResult res = toy_run_in_memory(cfg);

  // drive the same kernel by hand
  const Grid g = make_grid_2d(32, 32, 12.0, 12.0);
  ScalarField u = toy_initial(cfg);
  const double dt_full = cfg.cfl_safety * g.h[0] * g.h[0] / (2.0 * g.dim);
  double t = 0.0;
  auto heat = [](const Field& y) {
    Field lap = laplacian_flat(y);
    for (std::size_t i = 0; i < lap.size(); ++i) lap[i] = -lap[i];
    return lap;
  };
  while (t < cfg.t_end * (1.0 - 1e-14)) {
    double dt = dt_full;
    if (t + dt > cfg.t_end) dt = cfg.t_end - t;
    u = rk4_step(u, dt, heat);
    t += dt;
  }
  CHECK(max_diff(u, res.u) == 0.0);
}

TEST_CASE("run on gaussian data on a 3-torus stays finite") {
  FlowConfig cfg;
  cfg.dim = 3;
  cfg.n = {16, 16, 16};
  cfg.length = {2.0, 2.0, 2.0};
  cfg.init = Preset::GaussianBump;
  cfg.t_end = 5e-4;
  const RunResult rr = run_in_memory(cfg);
  CHECK(rr.status == "completed");
  CHECK(rr.rows.size() >= 3);
  const double max0 = rr.rows.front().max_rho;
  for (const DiagnosticsRow& row : rr.rows) {
    CHECK(std::isfinite(row.energy));
    CHECK(std::isfinite(row.min_rho));
    CHECK(row.max_rho <= max0 * (1.0 + 1e-10));
  }
}

TEST_CASE("divergence is detected with step and node") {
  FlowConfig cfg;
  cfg.dim = 2;
  cfg.n = {16, 16, 1};
  cfg.length = {1.0, 1.0, 1.0};
  cfg.init = Preset::RandomSmooth;
  FlowState st;
  st.psi = initial_data(cfg);
  bool threw = false;
  try {
    for (int s = 0; s < 60; ++s) st = step(st, 0.5, cfg);
  } catch (const DivergenceError& e) {
    threw = true;
    CHECK(e.step > 0);
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("stationarity of the constant spinor") {
  FlowConfig cfg;
  cfg.dim = 3;
  cfg.n = {8, 8, 8};
  cfg.length = {1.0, 1.0, 1.0};
  cfg.init = Preset::Constant;
  cfg.epsilon = 0.7;
  cfg.gauge = true;
  FlowState st;
  st.psi = initial_data(cfg);
  const SpinorField psi0 = st.psi;
  const double dt = cfl_dt(st.psi, cfg);
  for (int s = 0; s < 25; ++s) st = step(st, dt, cfg);
  CHECK(max_diff(st.psi, psi0) <= 1e-12);
}
