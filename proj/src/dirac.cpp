#include "spinflow/dirac.hpp"

#include <cmath>
#include <stdexcept>

namespace spinflow {

ScalarField conformal_factor(const SpinorField& psi) {
  if (psi.ncomp() != 4) throw std::invalid_argument("conformal_factor: spinor field expected");
  ScalarField out = make_scalar_field(psi.grid());
  const double* v = psi.data();
  double* o = out.data();
  parallel_for(psi.num_nodes(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double* p = v + i * 4;
      o[i] = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
    }
  });
  return out;
}

ScalarField clamp_floor(const ScalarField& rho, double floor) {
  ScalarField out = rho;
  double* o = out.data();
  parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) o[i] = o[i] < floor ? floor : o[i];
  });
  return out;
}

double ConformalGeometry::min_rho() const {
  const double* v = rho.data();
  return reduce_min(rho.size(), [&](std::size_t i) { return v[i]; });
}

double ConformalGeometry::max_rho() const {
  const double* v = rho.data();
  return reduce_max(rho.size(), [&](std::size_t i) { return v[i]; });
}

ConformalGeometry make_geometry_from_rho(const ScalarField& rho, double rho_floor) {
  ConformalGeometry geo;
  geo.rho_floor = rho_floor;
  geo.rho = rho;
  geo.rho_clamped = clamp_floor(rho, rho_floor);
  geo.log_rho = make_scalar_field(rho.grid());
  {
    const double* r = geo.rho_clamped.data();
    double* o = geo.log_rho.data();
    parallel_for(rho.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) o[i] = std::log(r[i]);
    });
  }
  geo.grad_rho = gradient_flat(geo.rho_clamped);
  geo.volume_weight = make_scalar_field(rho.grid());
  {
    const int dim = rho.grid().dim;
    const double* r = geo.rho.data();
    double* o = geo.volume_weight.data();
    parallel_for(rho.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i)
        o[i] = dim == 3 ? r[i] * r[i] * r[i] : r[i] * r[i];
    });
  }
  return geo;
}

ConformalGeometry make_geometry(const SpinorField& psi, double rho_floor) {
  return make_geometry_from_rho(conformal_factor(psi), rho_floor);
}

SpinorField dirac_flat(const SpinorField& phi) {
  if (phi.ncomp() != 4) throw std::invalid_argument("dirac_flat: spinor field expected");
  const Grid& g = phi.grid();
  SpinorField out = make_spinor_field(g);
  const double* v = phi.data();
  double* o = out.data();
  for (int a = 0; a < g.dim; ++a) {
    const double inv2h = 1.0 / (2.0 * g.h[a]);
    for_axis_neighbors(g, a, [&](std::size_t idx, std::size_t up, std::size_t dn) {
      double d[4];
      for (int c = 0; c < 4; ++c) d[c] = (v[up * 4 + c] - v[dn * 4 + c]) * inv2h;
      axis_action_accumulate(a, d, o + idx * 4);
    });
  }
  return out;
}

namespace {

SpinorField scale_by_scalar(const SpinorField& phi, const ScalarField& s) {
  SpinorField out = make_spinor_field(phi.grid());
  const double* v = phi.data();
  const double* w = s.data();
  double* o = out.data();
  parallel_for(phi.num_nodes(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (int c = 0; c < 4; ++c) o[i * 4 + c] = w[i] * v[i * 4 + c];
  });
  return out;
}

}  // namespace

SpinorField dirac_conformal(const ScalarField& rho_clamped, const SpinorField& phi, ConformalForm form) {
  if (!rho_clamped.grid().same_shape(phi.grid()))
    throw std::invalid_argument("dirac_conformal: grid mismatch");
  const double* r = rho_clamped.data();
  if (form == ConformalForm::A) {
    SpinorField t = dirac_flat(scale_by_scalar(phi, rho_clamped));
    double* o = t.data();
    parallel_for(t.num_nodes(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const double w = 1.0 / (r[i] * r[i]);
        for (int c = 0; c < 4; ++c) o[i * 4 + c] *= w;
      }
    });
    return t;
  }
  SpinorField t = dirac_flat(phi);
  VectorField grad = gradient_flat(rho_clamped);
  const double* v = phi.data();
  const double* gr = grad.data();
  double* o = t.data();
  parallel_for(t.num_nodes(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double inv_r = 1.0 / r[i];
      const double inv_r2 = inv_r * inv_r;
      const EvenSpinor p = {v[i * 4 + 0], v[i * 4 + 1], v[i * 4 + 2], v[i * 4 + 3]};
      const EvenSpinor cgp = clifford_action(gr[i * 3 + 0], gr[i * 3 + 1], gr[i * 3 + 2], p);
      o[i * 4 + 0] = inv_r * o[i * 4 + 0] + inv_r2 * cgp.s;
      o[i * 4 + 1] = inv_r * o[i * 4 + 1] + inv_r2 * cgp.b12;
      o[i * 4 + 2] = inv_r * o[i * 4 + 2] + inv_r2 * cgp.b13;
      o[i * 4 + 3] = inv_r * o[i * 4 + 3] + inv_r2 * cgp.b23;
    }
  });
  return t;
}

SpinorField dirac_conformal(const SpinorField& psi_metric, const SpinorField& phi, ConformalForm form,
                            double rho_floor) {
  const ScalarField rc = clamp_floor(conformal_factor(psi_metric), rho_floor);
  return dirac_conformal(rc, phi, form);
}

SpinorField dirac_squared_pinned(const ScalarField& rho_clamped, const SpinorField& phi) {
  return dirac_conformal(rho_clamped, dirac_conformal(rho_clamped, phi, ConformalForm::A),
                         ConformalForm::A);
}

SpinorField dirac_squared(const SpinorField& psi, double rho_floor) {
  const ScalarField rc = clamp_floor(conformal_factor(psi), rho_floor);
  return dirac_squared_pinned(rc, psi);
}

ScalarField scalar_curvature(const ScalarField& rho, double rho_floor) {
  const Grid& g = rho.grid();
  const ScalarField rc = clamp_floor(rho, rho_floor);
  ScalarField lg = make_scalar_field(g);
  {
    const double* r = rc.data();
    double* o = lg.data();
    parallel_for(lg.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) o[i] = std::log(r[i]);
    });
  }
  const ScalarField lap = laplacian_flat(lg);
  ScalarField out = make_scalar_field(g);
  const double* r = rc.data();
  const double* lp = lap.data();
  double* o = out.data();
  if (g.dim == 3) {
    const VectorField grad = gradient_flat(lg);
    const double* gr = grad.data();
    parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const double g2 = gr[i * 3 + 0] * gr[i * 3 + 0] + gr[i * 3 + 1] * gr[i * 3 + 1] +
                          gr[i * 3 + 2] * gr[i * 3 + 2];
        o[i] = (4.0 * lp[i] - 2.0 * g2) / (r[i] * r[i]);
      }
    });
  } else {
    parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) o[i] = 2.0 * lp[i] / (r[i] * r[i]);
    });
  }
  return out;
}

ScalarField conformal_laplacian_scalar(const ScalarField& rho, const ScalarField& f, double rho_floor) {
  const Grid& g = rho.grid();
  if (!g.same_shape(f.grid())) throw std::invalid_argument("conformal_laplacian_scalar: grid mismatch");
  const ScalarField rc = clamp_floor(rho, rho_floor);
  const ScalarField lapf = laplacian_flat(f);
  ScalarField out = make_scalar_field(g);
  const double* r = rc.data();
  const double* lp = lapf.data();
  double* o = out.data();
  if (g.dim == 3) {
    ScalarField lg = make_scalar_field(g);
    {
      double* lv = lg.data();
      parallel_for(lg.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) lv[i] = std::log(r[i]);
      });
    }
    const VectorField glg = gradient_flat(lg);
    const VectorField gf = gradient_flat(f);
    const double* a = glg.data();
    const double* b = gf.data();
    parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const double drift = a[i * 3 + 0] * b[i * 3 + 0] + a[i * 3 + 1] * b[i * 3 + 1] +
                             a[i * 3 + 2] * b[i * 3 + 2];
        o[i] = (lp[i] - drift) / (r[i] * r[i]);
      }
    });
  } else {
    parallel_for(out.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) o[i] = lp[i] / (r[i] * r[i]);
    });
  }
  return out;
}

VectorField frame(const SpinorField& psi, int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("frame: k must be 0, 1 or 2");
  const Grid& g = psi.grid();
  VectorField out = make_vector_field(g);
  Multivector ek;
  ek[1 + k] = 1.0;
  const std::size_t nn = psi.num_nodes();
  for (std::size_t i = 0; i < nn; ++i) {
    const auto [rho, rot] = polar_decompose(psi.spinor(i));  // throws at nodal points
    const Multivector e = sandwich(rot, ek);
    out.at(i, 0) = rho * e.c1;
    out.at(i, 1) = rho * e.c2;
    out.at(i, 2) = rho * e.c3;
  }
  return out;
}

}  // namespace spinflow
