#include "spinflow/diagnostics.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace spinflow {

double energy_pinned(const ScalarField& rho_clamped, const ScalarField& volume_weight,
                     const SpinorField& psi) {
  const SpinorField d = dirac_conformal(rho_clamped, psi, ConformalForm::A);
  return inner_product_l2(d, d, &volume_weight);
}

double energy(const SpinorField& psi, double rho_floor) {
  const ConformalGeometry geo = make_geometry(psi, rho_floor);
  return energy_pinned(geo.rho_clamped, geo.volume_weight, psi);
}

std::pair<double, double> weighted_norms(const SpinorField& psi, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("weighted_norms: alpha must be >= 0");
  const Grid& g = psi.grid();
  const ScalarField rho = conformal_factor(psi);
  ScalarField w = make_scalar_field(g);
  {
    const double* r = rho.data();
    double* o = w.data();
    parallel_for(w.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) o[i] = std::pow(r[i], alpha);
    });
  }
  const double l2 = inner_product_l2(psi, psi, &w);
  double h1 = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    const SpinorField d = diff_central(psi, a);
    h1 += inner_product_l2(d, d, &w);
  }
  return {l2, h1};
}

double energy_identity_gap(const std::vector<DiagnosticsRow>& rows, std::size_t i) {
  if (rows.size() < 3 || i == 0 || i + 1 >= rows.size())
    throw std::invalid_argument("energy_identity_gap: need a centered 3-row window");
  const double dEdt = (rows[i + 1].energy - rows[i - 1].energy) / (rows[i + 1].t - rows[i - 1].t);
  return dEdt + rows[i].dissipation;
}

namespace {

// |grad psi|^2 summed over components and axes.
ScalarField grad_square(const SpinorField& psi) {
  const Grid& g = psi.grid();
  ScalarField out = make_scalar_field(g);
  for (int a = 0; a < g.dim; ++a) {
    const SpinorField d = diff_central(psi, a);
    const double* dv = d.data();
    double* o = out.data();
    parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const double* p = dv + i * 4;
        o[i] += p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
      }
    });
  }
  return out;
}

}  // namespace

ScalarField residual_field(const SpinorField& psi, const SpinorField& rhs_value, double rho_floor) {
  const Grid& g = psi.grid();
  if (!g.same_shape(rhs_value.grid())) throw std::invalid_argument("residual_field: grid mismatch");
  const ScalarField rho = conformal_factor(psi);
  const ScalarField rc = clamp_floor(rho, rho_floor);

  ScalarField rho2 = make_scalar_field(g);
  {
    const double* r = rho.data();
    double* o = rho2.data();
    parallel_for(rho2.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) o[i] = r[i] * r[i];
    });
  }
  const ScalarField lap_g = conformal_laplacian_scalar(rho, rho2, rho_floor);
  const ScalarField curv = scalar_curvature(rho, rho_floor);
  const ScalarField gsq = grad_square(psi);

  ScalarField out = make_scalar_field(g);
  const double* pv = psi.data();
  const double* fv = rhs_value.data();
  const double* rcv = rc.data();
  const double* r2 = rho2.data();
  const double* lg = lap_g.data();
  const double* rg = curv.data();
  const double* gq = gsq.data();
  double* o = out.data();
  parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      double dot = 0.0;
      for (int c = 0; c < 4; ++c) dot += fv[i * 4 + c] * pv[i * 4 + c];
      const double predicted =
          -lg[i] - 2.0 * gq[i] / (rcv[i] * rcv[i]) - 0.5 * rg[i] * r2[i];
      o[i] = 2.0 * dot - predicted;
    }
  });
  return out;
}

ResidualNorms appendix_residual(const SpinorField& psi, const SpinorField& rhs_value,
                                double rho_floor) {
  const ScalarField r = residual_field(psi, rhs_value, rho_floor);
  const ScalarField rho = conformal_factor(psi);
  const double thr = 10.0 * rho_floor;
  const double* rv = r.data();
  const double* av = rho.data();
  const double sq = reduce_add(r.size(), [&](std::size_t i) {
    return av[i] > thr ? rv[i] * rv[i] : 0.0;
  });
  const double mx = reduce_max(r.size(), [&](std::size_t i) {
    return av[i] > thr ? std::abs(rv[i]) : 0.0;
  });
  ResidualNorms out;
  out.l2 = std::sqrt(sq * r.grid().cell_volume());
  out.linf = mx;
  return out;
}

NodalStats nodal_stats(const ScalarField& rho, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("nodal_stats: threshold must be positive");
  const Grid& g = rho.grid();
  const std::size_t nn = g.num_nodes();
  NodalStats out;
  out.mask.assign(nn, 0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < nn; ++i) {
    if (rho[i] < threshold) {
      out.mask[i] = 1;
      ++count;
    }
  }
  out.fraction = static_cast<double>(count) / static_cast<double>(nn);

  // flood fill over face-adjacent masked nodes, periodic wrap
  std::vector<std::uint8_t> seen(nn, 0);
  std::deque<std::size_t> queue;
  const int nx = g.n[0], ny = g.n[1], nz = g.n[2];
  auto push_neighbors = [&](std::size_t idx) {
    const int i = static_cast<int>(idx % nx);
    const int j = static_cast<int>((idx / nx) % ny);
    const int k = static_cast<int>(idx / (static_cast<std::size_t>(nx) * ny));
    const int coords[3] = {i, j, k};
    const int limits[3] = {nx, ny, nz};
    for (int a = 0; a < g.dim; ++a) {
      for (int s = -1; s <= 1; s += 2) {
        int c[3] = {coords[0], coords[1], coords[2]};
        c[a] = (c[a] + s + limits[a]) % limits[a];
        const std::size_t nb = g.index(c[0], c[1], c[2]);
        if (out.mask[nb] && !seen[nb]) {
          seen[nb] = 1;
          queue.push_back(nb);
        }
      }
    }
  };
  for (std::size_t i = 0; i < nn; ++i) {
    if (!out.mask[i] || seen[i]) continue;
    ++out.components;
    seen[i] = 1;
    queue.push_back(i);
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      push_neighbors(cur);
    }
  }
  return out;
}

std::vector<double> weighted_c_series(const std::vector<DiagnosticsRow>& rows) {
  std::vector<double> out(rows.size(), 0.0);
  if (rows.size() < 2) return out;
  auto ddt = [&](std::size_t i) {
    if (i == 0) return (rows[1].weighted_l2 - rows[0].weighted_l2) / (rows[1].t - rows[0].t);
    if (i + 1 == rows.size())
      return (rows[i].weighted_l2 - rows[i - 1].weighted_l2) / (rows[i].t - rows[i - 1].t);
    return (rows[i + 1].weighted_l2 - rows[i - 1].weighted_l2) / (rows[i + 1].t - rows[i - 1].t);
  };
  for (std::size_t i = 0; i < rows.size(); ++i)
    out[i] = (ddt(i) + rows[i].weighted_h1) / rows[i].weighted_l2;
  return out;
}

}  // namespace spinflow
