#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spinflow/diagnostics.hpp"
#include "spinflow/flow.hpp"

using namespace spinflow;

namespace {

ScalarField const_scalar(const Grid& g, double v) {
  ScalarField f = make_scalar_field(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = v;
  return f;
}

}  // namespace

TEST_CASE("energy functional") {
  const Grid g = make_grid_2d(32, 32, 1.0, 1.0);

  SpinorField c = make_spinor_field(g);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) c.set_spinor(i, {1.25, 0, 0, 0});
  CHECK(energy(c, kDefaultRhoFloor) == 0.0);

  // pinned rho = 1, psi = sin(kx) 1 on the unit torus: E = keff^2 / 2
  const ScalarField one = const_scalar(g, 1.0);
  const double k = 2.0 * M_PI;
  SpinorField mode = make_spinor_field(g);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i)
      mode.set_spinor(g.index(i, j), {std::sin(k * g.coord(i, 0)), 0, 0, 0});
  const double keff = oracles::k_eff(k, g.h[0]);
  CHECK(energy_pinned(one, one, mode) ==
        doctest::Approx(0.5 * keff * keff).epsilon(1e-12));

  // 2D homogeneity: psi -> s psi scales rho by s, and E by s^dim
  SpinorField f = make_spinor_field(g);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i) {
      const double th = 0.4 * std::sin(k * g.coord(i, 0));
      const double r = 1.0 + 0.2 * std::cos(k * g.coord(j, 1));
      f.set_spinor(g.index(i, j), {r * std::cos(th), r * std::sin(th), 0, 0});
    }
  const double e1 = energy(f, kDefaultRhoFloor);
  SpinorField f2 = f;
  for (std::size_t i = 0; i < f2.size(); ++i) f2[i] *= 2.0;
  CHECK(energy(f2, kDefaultRhoFloor) == doctest::Approx(4.0 * e1).epsilon(1e-10));

  // nonnegative always, and strictly positive off the parallel states
  CHECK(e1 > 0.0);
  const SpinorField rnd = initial_data(Preset::RandomSmooth, g, 5, 1.0, 1.0);
  CHECK(energy(rnd, kDefaultRhoFloor) > 0.0);
}

TEST_CASE("weighted norms") {
  const Grid g = make_grid_2d(16, 16, 1.0, 1.0);
  SpinorField c = make_spinor_field(g);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) c.set_spinor(i, {2.0, 0, 0, 0});

  // rho = 2, alpha = 2, unit volume -> int rho^2 |psi|^2 = 4 * 4 = 16
  const auto [wl2, wh1] = weighted_norms(c, 2.0);
  CHECK(wl2 == doctest::Approx(16.0).epsilon(1e-13));
  CHECK(wh1 == 0.0);

  // alpha = 0 gives the plain L2 norm squared
  const auto [pl2, ph1] = weighted_norms(c, 0.0);
  CHECK(pl2 == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(ph1 == 0.0);

  CHECK_THROWS_AS(weighted_norms(c, -1.0), std::invalid_argument);

  // nodal ring data: rho <= 1, so the alpha = 2 weight shrinks the norm
  const Grid rg = make_grid_2d(64, 64, 12.0, 12.0);
  const SpinorField ring = initial_data(Preset::NodalRing, rg, 1, 1.0, 1.0);
  const auto [w2, h2] = weighted_norms(ring, 2.0);
  const auto [w0, h0] = weighted_norms(ring, 0.0);
  (void)h2;
  (void)h0;
  CHECK(std::isfinite(w2));
  CHECK(w2 < w0);
}

TEST_CASE("energy identity gap") {
  // constant field: zero energy and dissipation at every row
  FlowConfig cfg;
  cfg.dim = 2;
  cfg.n = {16, 16, 1};
  cfg.length = {1.0, 1.0, 1.0};
  cfg.init = Preset::Constant;
  cfg.t_end = 4.0 * cfl_dt(1.0, cfg);
  const RunResult rr = run_in_memory(cfg);
  for (std::size_t i = 1; i + 1 < rr.rows.size(); ++i)
    CHECK(energy_identity_gap(rr.rows, i) == 0.0);
  for (const DiagnosticsRow& row : rr.rows) CHECK(row.nodal_fraction == 0.0);

  CHECK_THROWS_AS(energy_identity_gap(rr.rows, 0), std::invalid_argument);
  CHECK_THROWS_AS(energy_identity_gap(rr.rows, rr.rows.size() - 1), std::invalid_argument);

  // frozen metric, single mode: measured gap matches the scalar oracle
  const Grid g = make_grid_2d(32, 32, 1.0, 1.0);
  ScalarField one = const_scalar(g, 1.0);
  const double k = 2.0 * M_PI;
  const double lam = oracles::lambda_wide(k, g.h[0]);
  const double dt = 2e-4;
  FlowConfig fc;
  fc.dim = 2;
  fc.n = {32, 32, 1};
  fc.length = {1.0, 1.0, 1.0};
  FlowState st;
  st.psi = make_spinor_field(g);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i)
      st.psi.set_spinor(g.index(i, j), {std::sin(k * g.coord(i, 0)), 0, 0, 0});

  std::vector<DiagnosticsRow> rows;
  auto record = [&](const FlowState& s) {
    DiagnosticsRow row;
    row.t = s.t;
    const RhsParts parts = rhs_parts(s.psi, fc, &one);
    row.energy = inner_product_l2(parts.dirac_once, parts.dirac_once, &one);
    row.dissipation = 2.0 * inner_product_l2(parts.dirac_sq, parts.dirac_sq, &one);
    rows.push_back(row);
  };
  record(st);
  for (int s = 0; s < 4; ++s) {
    st = step(st, dt, fc, &one);
    record(st);
  }
  // oracle: E_i = E0 G^{2i}, Q_i = 2 lam^2 |psi_0|^2 G^{2i}
  const double growth = oracles::rk4_growth(lam, dt);
  const double e0 = rows[0].energy;
  const double q0 = rows[0].dissipation;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double gpow = std::pow(growth, 2.0 * i);
    const double oracle_gap = e0 * (std::pow(growth, 2.0 * (i + 1)) - std::pow(growth, 2.0 * (i - 1))) /
                                  (2.0 * dt) +
                              q0 * gpow;
    CHECK(energy_identity_gap(rows, i) == doctest::Approx(oracle_gap).epsilon(1e-8));
  }
}

TEST_CASE("conformal factor evolution residual") {
  // trivial case in both dimensions
  for (int dim : {2, 3}) {
    FlowConfig cfg;
    cfg.dim = dim;
    cfg.n = {16, 16, dim == 3 ? 16 : 1};
    cfg.length = {2.0, 2.0, dim == 3 ? 2.0 : 1.0};
    cfg.init = Preset::Constant;
    const SpinorField psi = initial_data(cfg);
    const ResidualNorms res = appendix_residual(psi, rhs(psi, cfg), cfg.rho_floor);
    CHECK(res.linf <= 1e-10);
    CHECK(res.l2 <= 1e-10);
  }

  // 3D: for psi = f(x) 1 the residual converges at O(h^2) to the gradient
  // term -(f'/f)^2, the footprint of the connection terms the composed
  // operator omits; the second-order parts cancel identically
  double devs[2];
  int lvl = 0;
  for (int n : {32, 64}) {
    FlowConfig cfg;
    cfg.dim = 3;
    cfg.n = {n, n, n};
    cfg.length = {2.0, 2.0, 2.0};
    const Grid g = cfg.make_grid();
    SpinorField psi = make_spinor_field(g);
    for (int kk = 0; kk < n; ++kk)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          psi.at(g.index(i, j, kk), 0) = 1.0 + 0.3 * std::sin(M_PI * g.coord(i, 0));
    const ScalarField r = residual_field(psi, rhs(psi, cfg), cfg.rho_floor);
    double worst = 0.0;
    for (int i = 0; i < n; i += 3) {
      const double x = g.coord(i, 0);
      const double f = 1.0 + 0.3 * std::sin(M_PI * x);
      const double fp = 0.3 * M_PI * std::cos(M_PI * x);
      worst = std::max(worst, std::abs(r[g.index(i, 5, 7)] + (fp / f) * (fp / f)));
    }
    devs[lvl++] = worst;
  }
  CHECK(devs[0] / devs[1] == doctest::Approx(4.0).epsilon(0.2));
  CHECK(devs[1] <= 0.04);

  // the two renderings of the metric evolution factor differ by exactly r/rho^2
  FlowConfig cfg;
  cfg.dim = 2;
  cfg.n = {32, 32, 1};
  cfg.length = {2.0, 2.0, 1.0};
  cfg.init = Preset::RandomSmooth;
  const SpinorField psi = initial_data(cfg);
  const SpinorField rv = rhs(psi, cfg);
  const ScalarField r = residual_field(psi, rv, cfg.rho_floor);
  const ScalarField rc = clamp_floor(conformal_factor(psi), cfg.rho_floor);
  for (std::size_t idx = 0; idx < psi.num_nodes(); idx += 97) {
    double dot = 0.0;
    for (int c = 0; c < 4; ++c) dot += rv.at(idx, c) * psi.at(idx, c);
    const double rho2 = rc[idx] * rc[idx];
    const double from_rate = 2.0 * dot / rho2;
    const double from_bracket = (2.0 * dot - r[idx]) / rho2;
    CHECK(from_rate - from_bracket == doctest::Approx(r[idx] / rho2).epsilon(1e-12));
  }
}

TEST_CASE("nodal statistics") {
  const Grid g = make_grid_2d(32, 32, 1.0, 1.0);
  CHECK_THROWS_AS(nodal_stats(const_scalar(g, 1.0), 0.0), std::invalid_argument);

  const NodalStats clean = nodal_stats(const_scalar(g, 1.0), 1e-5);
  CHECK(clean.fraction == 0.0);
  CHECK(clean.components == 0);

  // periodic wrap joins blobs across the seam
  ScalarField rho = const_scalar(g, 1.0);
  rho[g.index(31, 10)] = 0.0;
  rho[g.index(0, 10)] = 0.0;
  rho[g.index(16, 20)] = 0.0;
  const NodalStats s = nodal_stats(rho, 1e-5);
  CHECK(s.components == 2);
  CHECK(s.fraction == doctest::Approx(3.0 / 1024.0).epsilon(1e-14));

  // ring seed on a domain where the tail stays above threshold: one annulus
  const Grid rg = make_grid_2d(128, 128, 3.0, 3.0);
  const SpinorField ring = initial_data(Preset::NodalRing, rg, 1, 1.0, 1.0);
  const NodalStats rs = nodal_stats(conformal_factor(ring), rg.h[0]);
  CHECK(rs.components == 1);

  // empirical codimension proxy: masked nodes scale like n^(dim-1)
  const Grid rg2 = make_grid_2d(64, 64, 3.0, 3.0);
  const SpinorField ring2 = initial_data(Preset::NodalRing, rg2, 1, 1.0, 1.0);
  const NodalStats rs2 = nodal_stats(conformal_factor(ring2), rg2.h[0]);
  const double count_128 = rs.fraction * 128.0 * 128.0;
  const double count_64 = rs2.fraction * 64.0 * 64.0;
  CHECK(count_128 / count_64 == doctest::Approx(2.0).epsilon(0.5));
}

TEST_CASE("weighted estimate series") {
  FlowConfig cfg;
  cfg.dim = 2;
  cfg.n = {32, 32, 1};
  cfg.length = {2.0, 2.0, 1.0};
  cfg.init = Preset::GaussianBump;
  cfg.t_end = 6.0 * cfl_dt(std::exp(-2.0), cfg);
  const RunResult rr = run_in_memory(cfg);
  const auto cs = weighted_c_series(rr.rows);
  CHECK(cs.size() == rr.rows.size());
  for (double v : cs) CHECK(std::isfinite(v));
  CHECK(rr.sup_weighted_c >= 0.0);
}
