#pragma once

// Principal-symbol probe: compares ||D_g^2 psi_k|| against the pointwise
// prediction rho^-2 lambda_h(k) psi_k for plane waves over octaves of k,
// with a fixed smooth conformal factor in [0.75, 1.75].

#include <string>
#include <vector>

#include "spinflow/config.hpp"

namespace spinflow {

struct SymbolRow {
  int mode = 0;        // integer mode number m (k = 2 pi m / L)
  double k = 0.0;
  double kh = 0.0;
  double lambda_h = 0.0;  // wide-stencil symbol (sin(kh)/h)^2
  double ratio = 0.0;     // ||D^2 psi_k|| / ||rho^-2 lambda_h psi_k||
  double deviation = 0.0; // |ratio - 1|
};

std::vector<SymbolRow> symbol_sweep(const SymbolConfig& cfg);
std::string symbol_csv_string(const std::vector<SymbolRow>& rows);

// Writes symbol.csv and a manifest under cfg.outdir.
void run_symbol(const SymbolConfig& cfg);

}  // namespace spinflow
