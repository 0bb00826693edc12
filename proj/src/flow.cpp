#include "spinflow/flow.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "spinflow/integrate.hpp"
#include "spinflow/rng.hpp"

namespace spinflow {

Preset preset_from_name(const std::string& name) {
  if (name == "constant") return Preset::Constant;
  if (name == "gaussian_bump") return Preset::GaussianBump;
  if (name == "nodal_ring") return Preset::NodalRing;
  if (name == "random_smooth") return Preset::RandomSmooth;
  throw std::invalid_argument("unknown init preset: " + name);
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::Constant: return "constant";
    case Preset::GaussianBump: return "gaussian_bump";
    case Preset::NodalRing: return "nodal_ring";
    default: return "random_smooth";
  }
}

Grid FlowConfig::make_grid() const {
  if (dim == 3) return make_grid_3d(n[0], n[1], n[2], length[0], length[1], length[2]);
  return make_grid_2d(n[0], n[1], length[0], length[1]);
}

DivergenceError::DivergenceError(long long step_, std::size_t node_)
    : std::runtime_error("integrator diverged: non-finite value at step " + std::to_string(step_) +
                         ", node " + std::to_string(node_)),
      step(step_),
      node(node_) {}

namespace {

Field scaled(const Field& f, double a) {
  Field out(f.grid(), f.ncomp());
  const double* v = f.data();
  double* o = out.data();
  parallel_for(f.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) o[i] = a * v[i];
  });
  return out;
}

}  // namespace

SpinorField initial_data(Preset preset, const Grid& grid, std::uint64_t seed, double r0, double amp) {
  SpinorField psi = make_spinor_field(grid);
  const std::size_t nn = grid.num_nodes();
  const int nx = grid.n[0], ny = grid.n[1];
  auto node_coords = [&](std::size_t idx, int c[3]) {
    c[0] = static_cast<int>(idx % nx);
    c[1] = static_cast<int>((idx / nx) % ny);
    c[2] = static_cast<int>(idx / (static_cast<std::size_t>(nx) * ny));
  };
  auto center_r2 = [&](std::size_t idx) {
    int c[3];
    node_coords(idx, c);
    double r2 = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      const double d = grid.coord(c[a], a) - 0.5 * grid.length[a];
      r2 += d * d;
    }
    return r2;
  };

  switch (preset) {
    case Preset::Constant:
      for (std::size_t i = 0; i < nn; ++i) psi.at(i, 0) = amp;
      break;
    case Preset::GaussianBump:
      for (std::size_t i = 0; i < nn; ++i) psi.at(i, 0) = amp * std::exp(-center_r2(i));
      break;
    case Preset::NodalRing:
      for (std::size_t i = 0; i < nn; ++i) {
        const double r2 = center_r2(i);
        psi.at(i, 0) = amp * (r2 - r0 * r0) * std::exp(-r2);
      }
      break;
    case Preset::RandomSmooth: {
      // low-frequency trigonometric polynomial per component around psi = 1
      struct Mode {
        int m[3];
        double a, b, scale;
      };
      SplitMix64 rng(seed);
      for (int comp = 0; comp < 4; ++comp) {
        std::vector<Mode> modes;
        for (int mx = 0; mx <= 2; ++mx)
          for (int my = -2; my <= 2; ++my)
            for (int mz = (grid.dim == 3 ? -2 : 0); mz <= (grid.dim == 3 ? 2 : 0); ++mz) {
              if (mx == 0 && my == 0 && mz == 0) continue;
              if (mx == 0 && (my < 0 || (my == 0 && mz < 0))) continue;  // dedupe +-m
              Mode mo;
              mo.m[0] = mx; mo.m[1] = my; mo.m[2] = mz;
              const double m2 = mx * mx + my * my + mz * mz;
              mo.scale = 0.1 / (1.0 + m2);
              mo.a = rng.uniform_pm1();
              mo.b = rng.uniform_pm1();
              modes.push_back(mo);
            }
        for (std::size_t idx = 0; idx < nn; ++idx) {
          int c[3];
          node_coords(idx, c);
          double v = comp == 0 ? 1.0 : 0.0;
          for (const Mode& mo : modes) {
            double phase = 0.0;
            for (int a = 0; a < grid.dim; ++a)
              phase += 2.0 * M_PI * mo.m[a] * grid.coord(c[a], a) / grid.length[a];
            v += mo.scale * (mo.a * std::cos(phase) + mo.b * std::sin(phase));
          }
          psi.at(idx, comp) = amp * v;
        }
      }
      break;
    }
  }
  return psi;
}

SpinorField initial_data(const FlowConfig& cfg) {
  return initial_data(cfg.init, cfg.make_grid(), cfg.seed, cfg.init_r0, cfg.init_amp);
}

RhsParts rhs_parts(const SpinorField& psi, const FlowConfig& cfg, const ScalarField* pinned) {
  RhsParts out;
  const ScalarField rho_c = pinned ? *pinned : clamp_floor(conformal_factor(psi), cfg.rho_floor);
  out.dirac_once = dirac_conformal(rho_c, psi, ConformalForm::A);
  out.dirac_sq = dirac_conformal(rho_c, out.dirac_once, ConformalForm::A);
  out.total = scaled(out.dirac_sq, -1.0);
  if (cfg.epsilon > 0.0) {
    const SpinorField lap = laplacian_flat(psi);
    axpy(-cfg.epsilon, lap, out.total);
  }
  if (cfg.gauge) {
    ScalarField lg = make_scalar_field(psi.grid());
    const double* r = rho_c.data();
    double* o = lg.data();
    parallel_for(lg.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) o[i] = std::log(r[i]);
    });
    const VectorField w = gradient_flat(lg);
    const SpinorField adv = directional_derivative(w, psi);
    axpy(1.0, adv, out.total);
  }
  return out;
}

SpinorField rhs(const SpinorField& psi, const FlowConfig& cfg, const ScalarField* pinned) {
  return rhs_parts(psi, cfg, pinned).total;
}

double cfl_dt(double min_rho_clamped, const FlowConfig& cfg) {
  const Grid g = cfg.make_grid();
  const double h = g.min_h();
  const double coeff = 1.0 / (min_rho_clamped * min_rho_clamped) + cfg.epsilon;
  return cfg.cfl_safety * h * h / (2.0 * g.dim * coeff);
}

double cfl_dt(const SpinorField& psi, const FlowConfig& cfg) {
  const ScalarField rho_c = clamp_floor(conformal_factor(psi), cfg.rho_floor);
  const double* v = rho_c.data();
  const double rmin = reduce_min(rho_c.size(), [&](std::size_t i) { return v[i]; });
  return cfl_dt(rmin, cfg);
}

FlowState step(const FlowState& s, double dt, const FlowConfig& cfg, const ScalarField* pinned) {
  FlowState out;
  out.t = s.t + dt;
  out.step = s.step + 1;
  out.psi = rk4_step(s.psi, dt, [&](const Field& y) { return rhs(y, cfg, pinned); });
  const std::size_t bad = first_non_finite(out.psi);
  if (bad != out.psi.size()) throw DivergenceError(out.step, bad / 4);
  return out;
}

namespace {

DiagnosticsRow make_row(const FlowState& s, double dt_used, const FlowConfig& cfg,
                        const ScalarField* pinned) {
  DiagnosticsRow row;
  row.step = s.step;
  row.t = s.t;
  row.dt = dt_used;

  const ConformalGeometry geo = pinned ? make_geometry_from_rho(*pinned, cfg.rho_floor)
                                       : make_geometry(s.psi, cfg.rho_floor);
  const RhsParts parts = rhs_parts(s.psi, cfg, pinned ? &geo.rho_clamped : nullptr);

  row.energy = inner_product_l2(parts.dirac_once, parts.dirac_once, &geo.volume_weight);
  row.dissipation = 2.0 * inner_product_l2(parts.dirac_sq, parts.dirac_sq, &geo.volume_weight);
  const auto [wl2, wh1] = weighted_norms(s.psi, cfg.alpha);
  row.weighted_l2 = wl2;
  row.weighted_h1 = wh1;
  row.min_rho = geo.min_rho();
  row.max_rho = geo.max_rho();
  const ScalarField rho_for_mask = pinned ? geo.rho : conformal_factor(s.psi);
  const double* rv = rho_for_mask.data();
  const double thr = 10.0 * cfg.rho_floor;
  const double masked = reduce_add(rho_for_mask.size(),
                                   [&](std::size_t i) { return rv[i] < thr ? 1.0 : 0.0; });
  row.nodal_fraction = masked / static_cast<double>(rho_for_mask.size());
  const ResidualNorms res = appendix_residual(s.psi, parts.total, cfg.rho_floor);
  row.resA_l2 = res.l2;
  row.resA_linf = res.linf;
  return row;
}

}  // namespace

RunResult run_in_memory(const FlowConfig& cfg, const ScalarField* pinned) {
  return run_with_callback(cfg, pinned, nullptr);
}

RunResult run_with_callback(const FlowConfig& cfg, const ScalarField* pinned,
                            const std::function<void(const FlowState&)>* on_step) {
  RunResult result;
  FlowState state;
  state.t = 0.0;
  state.step = 0;
  state.psi = initial_data(cfg);

  result.rows.push_back(make_row(state, 0.0, cfg, pinned));
  if (on_step) (*on_step)(state);

  result.status = "completed";
  try {
    while (state.t < cfg.t_end * (1.0 - 1e-14)) {
      double dt = cfg.dt_policy == DtPolicy::Fixed ? cfg.dt_fixed : cfl_dt(state.psi, cfg);
      if (pinned && cfg.dt_policy == DtPolicy::Cfl) {
        const double* v = pinned->data();
        const double rmin = reduce_min(pinned->size(), [&](std::size_t i) { return v[i]; });
        dt = cfl_dt(rmin, cfg);
      }
      if (state.t + dt > cfg.t_end) dt = cfg.t_end - state.t;
      state = step(state, dt, cfg, pinned);
      result.rows.push_back(make_row(state, dt, cfg, pinned));
      if (on_step) (*on_step)(state);
    }
  } catch (const DivergenceError& e) {
    result.status = "diverged(step=" + std::to_string(e.step) + ")";
  }

  // centered energy-gap and monotonicity flags
  auto& rows = result.rows;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) rows[i].energy_gap = energy_identity_gap(rows, i);
  for (std::size_t i = 1; i < rows.size(); ++i)
    rows[i].monotone = rows[i].energy <= rows[i - 1].energy * (1.0 + 1e-12) + 1e-300;

  const auto c_series = weighted_c_series(rows);
  double sup_c = 0.0;
  for (double c : c_series) sup_c = std::max(sup_c, std::abs(c));
  result.sup_weighted_c = sup_c;

  if (result.status == "completed" && !rows.empty() && rows.back().min_rho <= cfg.rho_floor)
    result.status = "floor-dominated";

  result.final_state = std::move(state);
  return result;
}

}  // namespace spinflow
