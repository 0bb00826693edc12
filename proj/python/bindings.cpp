#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <sstream>

#include "spinflow/clifford.hpp"
#include "spinflow/config.hpp"
#include "spinflow/diagnostics.hpp"
#include "spinflow/dirac.hpp"
#include "spinflow/flow.hpp"
#include "spinflow/io.hpp"
#include "spinflow/symbol.hpp"
#include "spinflow/toy2d.hpp"
#include "spinflow/verify.hpp"
#include "spinflow/version.hpp"

namespace py = pybind11;
using namespace spinflow;

namespace {

// numpy layout: (ny, nx, ncomp) in 2D, (nz, ny, nx, ncomp) in 3D (x fastest)
py::array_t<double> field_to_numpy(const Field& f) {
  const Grid& g = f.grid();
  std::vector<py::ssize_t> shape;
  if (g.dim == 3) shape = {g.n[2], g.n[1], g.n[0], f.ncomp()};
  else shape = {g.n[1], g.n[0], f.ncomp()};
  py::array_t<double> out(shape);
  std::memcpy(out.mutable_data(), f.data(), f.size() * sizeof(double));
  return out;
}

Field field_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> arr,
                       std::vector<double> lengths) {
  const py::buffer_info info = arr.request();
  if (info.ndim != 3 && info.ndim != 4)
    throw std::invalid_argument("expected array of shape (ny, nx, ncomp) or (nz, ny, nx, ncomp)");
  const int dim = static_cast<int>(info.ndim) - 1;
  if (static_cast<int>(lengths.size()) != dim)
    throw std::invalid_argument("lengths must have one entry per grid axis");
  Grid g;
  if (dim == 3)
    g = make_grid_3d(static_cast<int>(info.shape[2]), static_cast<int>(info.shape[1]),
                     static_cast<int>(info.shape[0]), lengths[0], lengths[1], lengths[2]);
  else
    g = make_grid_2d(static_cast<int>(info.shape[1]), static_cast<int>(info.shape[0]), lengths[0],
                     lengths[1]);
  Field f(g, static_cast<int>(info.shape[info.ndim - 1]));
  std::memcpy(f.data(), info.ptr, f.size() * sizeof(double));
  return f;
}

py::dict rows_to_dict(const std::vector<DiagnosticsRow>& rows) {
  const py::ssize_t n = static_cast<py::ssize_t>(rows.size());
  auto col = [&](auto getter) {
    py::array_t<double> a(n);
    double* p = a.mutable_data();
    for (py::ssize_t i = 0; i < n; ++i) p[i] = getter(rows[static_cast<std::size_t>(i)]);
    return a;
  };
  py::dict d;
  d["step"] = col([](const DiagnosticsRow& r) { return static_cast<double>(r.step); });
  d["t"] = col([](const DiagnosticsRow& r) { return r.t; });
  d["dt"] = col([](const DiagnosticsRow& r) { return r.dt; });
  d["energy"] = col([](const DiagnosticsRow& r) { return r.energy; });
  d["weighted_l2"] = col([](const DiagnosticsRow& r) { return r.weighted_l2; });
  d["weighted_h1"] = col([](const DiagnosticsRow& r) { return r.weighted_h1; });
  d["min_rho"] = col([](const DiagnosticsRow& r) { return r.min_rho; });
  d["max_rho"] = col([](const DiagnosticsRow& r) { return r.max_rho; });
  d["nodal_fraction"] = col([](const DiagnosticsRow& r) { return r.nodal_fraction; });
  d["resA_l2"] = col([](const DiagnosticsRow& r) { return r.resA_l2; });
  d["resA_linf"] = col([](const DiagnosticsRow& r) { return r.resA_linf; });
  d["energy_gap"] = col([](const DiagnosticsRow& r) { return r.energy_gap; });
  return d;
}

py::dict toy_rows_to_dict(const std::vector<ToyRow>& rows) {
  const py::ssize_t n = static_cast<py::ssize_t>(rows.size());
  auto col = [&](auto getter) {
    py::array_t<double> a(n);
    double* p = a.mutable_data();
    for (py::ssize_t i = 0; i < n; ++i) p[i] = getter(rows[static_cast<std::size_t>(i)]);
    return a;
  };
  py::dict d;
  d["step"] = col([](const ToyRow& r) { return static_cast<double>(r.step); });
  d["t"] = col([](const ToyRow& r) { return r.t; });
  d["dt"] = col([](const ToyRow& r) { return r.dt; });
  d["linf_err"] = col([](const ToyRow& r) { return r.linf_err; });
  d["l2_err"] = col([](const ToyRow& r) { return r.l2_err; });
  d["mass"] = col([](const ToyRow& r) { return r.mass; });
  d["detg_min"] = col([](const ToyRow& r) { return r.detg_min; });
  d["detg_max"] = col([](const ToyRow& r) { return r.detg_max; });
  return d;
}

}  // namespace

PYBIND11_MODULE(_spinflow, m) {
  m.doc() = "Spinorial heat flow on flat periodic domains: Cl(3) algebra, "
            "conformal Dirac operators, the regularized flow, and its diagnostics.";
  m.attr("__version__") = SPINFLOW_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DivergenceError>(m, "DivergenceError");
  py::register_exception<SnapshotError>(m, "SnapshotError");

  py::class_<Multivector>(m, "Multivector")
      .def(py::init([](double c0, double c1, double c2, double c3, double c12, double c13,
                       double c23, double c123) {
             return Multivector{c0, c1, c2, c3, c12, c13, c23, c123};
           }),
           py::arg("c0") = 0.0, py::arg("c1") = 0.0, py::arg("c2") = 0.0, py::arg("c3") = 0.0,
           py::arg("c12") = 0.0, py::arg("c13") = 0.0, py::arg("c23") = 0.0,
           py::arg("c123") = 0.0)
      .def_readwrite("c0", &Multivector::c0)
      .def_readwrite("c1", &Multivector::c1)
      .def_readwrite("c2", &Multivector::c2)
      .def_readwrite("c3", &Multivector::c3)
      .def_readwrite("c12", &Multivector::c12)
      .def_readwrite("c13", &Multivector::c13)
      .def_readwrite("c23", &Multivector::c23)
      .def_readwrite("c123", &Multivector::c123)
      .def("__mul__", &geometric_product)
      .def("__add__", &Multivector::operator+)
      .def("__sub__", &Multivector::operator-)
      .def("reverse", [](const Multivector& a) { return reverse(a); })
      .def("grade", &grade, py::arg("k"))
      .def("__repr__", [](const Multivector& a) {
        std::ostringstream os;
        os << "Multivector(" << a.c0 << ", " << a.c1 << ", " << a.c2 << ", " << a.c3 << ", "
           << a.c12 << ", " << a.c13 << ", " << a.c23 << ", " << a.c123 << ")";
        return os.str();
      });

  py::class_<EvenSpinor>(m, "EvenSpinor")
      .def(py::init([](double s, double b12, double b13, double b23) {
             return EvenSpinor{s, b12, b13, b23};
           }),
           py::arg("s") = 0.0, py::arg("b12") = 0.0, py::arg("b13") = 0.0, py::arg("b23") = 0.0)
      .def_readwrite("s", &EvenSpinor::s)
      .def_readwrite("b12", &EvenSpinor::b12)
      .def_readwrite("b13", &EvenSpinor::b13)
      .def_readwrite("b23", &EvenSpinor::b23)
      .def("__mul__", &even_product)
      .def("reverse", [](const EvenSpinor& a) { return reverse(a); })
      .def("amplitude", [](const EvenSpinor& a) { return amplitude(a); })
      .def("to_multivector", &to_multivector)
      .def("__repr__", [](const EvenSpinor& a) {
        std::ostringstream os;
        os << "EvenSpinor(" << a.s << ", " << a.b12 << ", " << a.b13 << ", " << a.b23 << ")";
        return os.str();
      });

  m.def("geometric_product", &geometric_product);
  m.def("polar_decompose", [](const EvenSpinor& p) {
    const auto d = polar_decompose(p);
    return py::make_tuple(d.rho, d.rotor);
  });
  m.def("sandwich", &sandwich, py::arg("psi"), py::arg("v"));
  m.def(
      "clifford_action",
      [](std::array<double, 3> v, const EvenSpinor& p) {
        return clifford_action(v[0], v[1], v[2], p);
      },
      py::arg("v"), py::arg("psi"));

  py::class_<Field>(m, "Field")
      .def_property_readonly("dim", [](const Field& f) { return f.grid().dim; })
      .def_property_readonly("ncomp", &Field::ncomp)
      .def_property_readonly("n",
                             [](const Field& f) {
                               const Grid& g = f.grid();
                               return std::vector<int>(g.n.begin(), g.n.begin() + g.dim);
                             })
      .def_property_readonly("lengths",
                             [](const Field& f) {
                               const Grid& g = f.grid();
                               return std::vector<double>(g.length.begin(),
                                                          g.length.begin() + g.dim);
                             })
      .def("to_numpy", &field_to_numpy)
      .def_static("from_numpy", &field_from_numpy, py::arg("array"), py::arg("lengths"),
                  "array shape (ny, nx, ncomp) or (nz, ny, nx, ncomp), x fastest");

  // operators
  m.def("conformal_factor", &conformal_factor);
  m.def("clamp_floor", &clamp_floor, py::arg("rho"), py::arg("floor"));
  m.def("dirac_flat", &dirac_flat);
  m.def("laplacian_flat", &laplacian_flat);
  m.def("laplacian_wide", &laplacian_wide);
  m.def("diff_central", &diff_central, py::arg("field"), py::arg("axis"));
  m.def("gradient_flat", &gradient_flat);
  m.def(
      "dirac_conformal",
      [](const ScalarField& rho_clamped, const SpinorField& phi, const std::string& form) {
        return dirac_conformal(rho_clamped, phi,
                               form == "B" ? ConformalForm::B : ConformalForm::A);
      },
      py::arg("rho_clamped"), py::arg("phi"), py::arg("form") = "A");
  m.def("dirac_squared", &dirac_squared, py::arg("psi"), py::arg("rho_floor") = kDefaultRhoFloor);
  m.def("dirac_squared_pinned", &dirac_squared_pinned, py::arg("rho_clamped"), py::arg("phi"));
  m.def("scalar_curvature", &scalar_curvature, py::arg("rho"),
        py::arg("rho_floor") = kDefaultRhoFloor);
  m.def("conformal_laplacian_scalar", &conformal_laplacian_scalar, py::arg("rho"), py::arg("f"),
        py::arg("rho_floor") = kDefaultRhoFloor);
  m.def(
      "frame", [](const SpinorField& psi, int k) { return frame(psi, k); }, py::arg("psi"),
      py::arg("k"));

  // diagnostics
  m.def("energy", &energy, py::arg("psi"), py::arg("rho_floor") = kDefaultRhoFloor);
  m.def("weighted_norms", &weighted_norms, py::arg("psi"), py::arg("alpha"));
  m.def(
      "nodal_stats",
      [](const ScalarField& rho, double threshold) {
        const NodalStats s = nodal_stats(rho, threshold);
        py::array_t<bool> mask(static_cast<py::ssize_t>(s.mask.size()));
        bool* p = mask.mutable_data();
        for (std::size_t i = 0; i < s.mask.size(); ++i) p[i] = s.mask[i] != 0;
        return py::make_tuple(mask, s.fraction, s.components);
      },
      py::arg("rho"), py::arg("threshold"));

  // runs driven by the same key = value configuration text as the CLI
  m.def(
      "flow_run",
      [](const std::string& config_text, const std::vector<std::string>& overrides) {
        const Mode mode = Mode::Flow;
        const ParsedConfig cfg = parse_config(config_text, overrides, &mode);
        const RunResult rr = run_in_memory(cfg.flow);
        py::dict d;
        d["status"] = rr.status;
        d["steps"] = rr.final_state.step;
        d["sup_weighted_C"] = rr.sup_weighted_c;
        d["rows"] = rows_to_dict(rr.rows);
        d["psi"] = rr.final_state.psi;
        return d;
      },
      py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "toy_run",
      [](const std::string& config_text, const std::vector<std::string>& overrides) {
        const Mode mode = Mode::Toy2d;
        const ParsedConfig cfg = parse_config(config_text, overrides, &mode);
        const ToyResult tr = toy_run_in_memory(cfg.toy);
        py::dict d;
        d["status"] = tr.status;
        d["rows"] = toy_rows_to_dict(tr.rows);
        d["u"] = tr.u;
        return d;
      },
      py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{});
  m.def("exact_u", &exact_u, py::arg("x"), py::arg("y"), py::arg("t"));
  m.def(
      "initial_data",
      [](const std::string& preset, std::vector<int> n, std::vector<double> lengths,
         std::uint64_t seed, double r0, double amp) {
        Grid g;
        if (n.size() == 3)
          g = make_grid_3d(n[0], n[1], n[2], lengths[0], lengths[1], lengths[2]);
        else
          g = make_grid_2d(n[0], n[1], lengths[0], lengths[1]);
        return initial_data(preset_from_name(preset), g, seed, r0, amp);
      },
      py::arg("preset"), py::arg("n"), py::arg("lengths"), py::arg("seed") = 12345,
      py::arg("r0") = 1.0, py::arg("amp") = 1.0);
  m.def(
      "symbol_sweep",
      [](int n, double length, int base_mode, int octaves) {
        SymbolConfig cfg;
        cfg.n = n;
        cfg.length = length;
        cfg.base_mode = base_mode;
        cfg.octaves = octaves;
        py::list out;
        for (const SymbolRow& r : symbol_sweep(cfg)) {
          py::dict d;
          d["mode"] = r.mode;
          d["k"] = r.k;
          d["kh"] = r.kh;
          d["lambda_h"] = r.lambda_h;
          d["ratio"] = r.ratio;
          d["deviation"] = r.deviation;
          out.append(d);
        }
        return out;
      },
      py::arg("n") = 128, py::arg("length") = 1.0, py::arg("base_mode") = 4,
      py::arg("octaves") = 3);

  // snapshots
  m.def("write_snapshot", &write_snapshot, py::arg("field"), py::arg("path"));
  m.def("read_snapshot", &read_snapshot, py::arg("path"));

  // verification
  m.def(
      "verify",
      [](const std::string& filter) {
        std::ostringstream os;
        const int failures = run_checks(filter, os);
        return py::make_tuple(failures, os.str());
      },
      py::arg("filter") = "",
      "Run named property checks; returns (failure_count, report). Filters: "
      "'group:<name>' or 'name:<check>'.");

  m.def("set_max_threads", &set_max_threads);
  m.def("max_threads", &max_threads);
}
