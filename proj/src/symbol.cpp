#include "spinflow/symbol.hpp"

#include <cmath>
#include <filesystem>

#include "spinflow/dirac.hpp"
#include "spinflow/io.hpp"
#include "spinflow/version.hpp"

namespace spinflow {

std::vector<SymbolRow> symbol_sweep(const SymbolConfig& cfg) {
  const Grid g = make_grid_2d(cfg.n, cfg.n, cfg.length, cfg.length);
  const double L = cfg.length;

  ScalarField rho = make_scalar_field(g);
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i)
      rho[g.index(i, j)] = 1.25 + 0.5 * std::sin(2.0 * M_PI * g.coord(i, 0) / L);
  const ScalarField rho_c = clamp_floor(rho, kDefaultRhoFloor);

  std::vector<SymbolRow> rows;
  for (int oct = 0; oct < cfg.octaves; ++oct) {
    const int m = cfg.base_mode << oct;
    const double k = 2.0 * M_PI * m / L;
    const double h = g.h[0];
    const double keff = std::sin(k * h) / h;
    const double lambda = keff * keff;

    SpinorField probe = make_spinor_field(g);
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i)
        probe.at(g.index(i, j), 0) = std::sin(k * g.coord(i, 0));

    const SpinorField d2 = dirac_squared_pinned(rho_c, probe);

    SpinorField predicted = make_spinor_field(g);
    const double* rv = rho_c.data();
    const double* pv = probe.data();
    double* ov = predicted.data();
    parallel_for(predicted.num_nodes(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const double w = lambda / (rv[i] * rv[i]);
        for (int c = 0; c < 4; ++c) ov[i * 4 + c] = w * pv[i * 4 + c];
      }
    });

    SymbolRow row;
    row.mode = m;
    row.k = k;
    row.kh = k * h;
    row.lambda_h = lambda;
    row.ratio = norms(d2).l2 / norms(predicted).l2;
    row.deviation = std::abs(row.ratio - 1.0);
    rows.push_back(row);
  }
  return rows;
}

std::string symbol_csv_string(const std::vector<SymbolRow>& rows) {
  std::string out = "mode,k,kh,lambda_h,ratio,deviation\n";
  for (const SymbolRow& r : rows) {
    out += std::to_string(r.mode);
    out += ',';
    out += format_double(r.k);
    out += ',';
    out += format_double(r.kh);
    out += ',';
    out += format_double(r.lambda_h);
    out += ',';
    out += format_double(r.ratio);
    out += ',';
    out += format_double(r.deviation);
    out += '\n';
  }
  return out;
}

void run_symbol(const SymbolConfig& cfg) {
  std::filesystem::create_directories(cfg.outdir);
  Manifest m;
  m.set("version", SPINFLOW_VERSION);
  m.set("mode", "symbol");
  m.set("n", std::to_string(cfg.n));
  m.set("L", format_double(cfg.length));
  m.set("started", timestamp_utc());
  m.set("status", "running");
  const std::string manifest_path = cfg.outdir + "/manifest.txt";
  write_text_file(manifest_path, m.to_string());

  const auto rows = symbol_sweep(cfg);
  write_text_file(cfg.outdir + "/symbol.csv", symbol_csv_string(rows));

  m.set("status", "completed");
  m.set("finished", timestamp_utc());
  write_text_file(manifest_path, m.to_string());
}

}  // namespace spinflow
