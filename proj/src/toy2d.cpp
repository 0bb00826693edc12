#include "spinflow/toy2d.hpp"

#include <cmath>
#include <stdexcept>

#include "spinflow/integrate.hpp"

namespace spinflow {

double exact_u(double x, double y, double t) {
  if (t < 0.0) throw std::invalid_argument("exact_u: t must be >= 0");
  const double s = 4.0 * t + 1.0;
  return std::exp(-(x * x + y * y) / s) / s;
}

double toy_coord(const ToyConfig& cfg, int i) {
  const double h = 2.0 * cfg.half_width / cfg.n;
  return -cfg.half_width + h * i;
}

namespace {

Grid toy_grid(const ToyConfig& cfg) {
  return make_grid_2d(cfg.n, cfg.n, 2.0 * cfg.half_width, 2.0 * cfg.half_width);
}

}  // namespace

ScalarField toy_initial(const ToyConfig& cfg) {
  const Grid g = toy_grid(cfg);
  ScalarField u = make_scalar_field(g);
  for (int j = 0; j < cfg.n; ++j)
    for (int i = 0; i < cfg.n; ++i)
      u[g.index(i, j)] = exact_u(toy_coord(cfg, i), toy_coord(cfg, j), 0.0);
  return u;
}

std::pair<double, double> detg_monitor(const ScalarField& u) {
  const double* v = u.data();
  const double mn = reduce_min(u.size(), [&](std::size_t i) {
    const double q = v[i] * v[i];
    return q * q;
  });
  const double mx = reduce_max(u.size(), [&](std::size_t i) {
    const double q = v[i] * v[i];
    return q * q;
  });
  return {mn, mx};
}

namespace {

ToyRow toy_row(const ToyConfig& cfg, const ScalarField& u, long long step, double t, double dt) {
  ToyRow row;
  row.step = step;
  row.t = t;
  row.dt = dt;
  const Grid& g = u.grid();
  ScalarField err = make_scalar_field(g);
  for (int j = 0; j < cfg.n; ++j)
    for (int i = 0; i < cfg.n; ++i) {
      const std::size_t idx = g.index(i, j);
      err[idx] = u[idx] - exact_u(toy_coord(cfg, i), toy_coord(cfg, j), t);
    }
  const Norms nrm = norms(err);
  row.linf_err = nrm.linf;
  row.l2_err = nrm.l2;
  row.mass = integrate(u);
  const auto [dmin, dmax] = detg_monitor(u);
  row.detg_min = dmin;
  row.detg_max = dmax;
  return row;
}

}  // namespace

ToyResult toy_run_with_callback(const ToyConfig& cfg,
                                const std::function<void(long long, const ScalarField&)>* on_step) {
  const Grid g = toy_grid(cfg);
  ToyResult result;
  result.status = "completed";
  result.u = toy_initial(cfg);

  const double h = g.min_h();
  double t = 0.0;
  long long step = 0;
  result.rows.push_back(toy_row(cfg, result.u, step, t, 0.0));
  if (on_step) (*on_step)(step, result.u);

  auto heat_rhs = [](const Field& y) {
    Field lap = laplacian_flat(y);
    double* o = lap.data();
    parallel_for(lap.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) o[i] = -o[i];
    });
    return lap;
  };

  while (t < cfg.t_end * (1.0 - 1e-14)) {
    double dt = cfg.dt_fixed_policy ? cfg.dt_fixed : cfg.cfl_safety * h * h / (2.0 * g.dim);
    if (t + dt > cfg.t_end) dt = cfg.t_end - t;
    result.u = rk4_step(result.u, dt, heat_rhs);
    t += dt;
    ++step;
    const std::size_t bad = first_non_finite(result.u);
    if (bad != result.u.size()) {
      result.status = "diverged(step=" + std::to_string(step) + ")";
      break;
    }
    result.rows.push_back(toy_row(cfg, result.u, step, t, dt));
    if (on_step) (*on_step)(step, result.u);
  }
  return result;
}

ToyResult toy_run_in_memory(const ToyConfig& cfg) { return toy_run_with_callback(cfg, nullptr); }

}  // namespace spinflow
