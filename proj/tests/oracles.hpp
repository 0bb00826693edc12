#pragma once

// Test-side oracles, independent of the library implementation:
//  - blade products built symbolically from E_i E_j + E_j E_i = 2 delta_ij
//  - discrete Fourier symbols of the stencils
//  - the scalar RK4 amplification factor

#include <cmath>
#include <utility>
#include <vector>

#include "spinflow/clifford.hpp"

namespace oracles {

// blade index: 0:1, 1:E1, 2:E2, 3:E3, 4:E12, 5:E13, 6:E23, 7:E123
inline const std::vector<std::vector<int>>& blade_words() {
  static const std::vector<std::vector<int>> w = {
      {}, {1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}};
  return w;
}

// Multiply two blades by concatenating generator words, bubble-sorting with a
// sign per swap, and contracting E_i E_i = 1. Returns (sign, blade index).
inline std::pair<int, int> blade_product(int a, int b) {
  std::vector<int> word = blade_words()[a];
  const auto& wb = blade_words()[b];
  word.insert(word.end(), wb.begin(), wb.end());
  int sign = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
      if (word[i] > word[i + 1]) {
        std::swap(word[i], word[i + 1]);
        sign = -sign;
        changed = true;
      } else if (word[i] == word[i + 1]) {
        word.erase(word.begin() + i, word.begin() + i + 2);
        changed = true;
        break;
      }
    }
  }
  for (std::size_t idx = 0; idx < blade_words().size(); ++idx)
    if (blade_words()[idx] == word) return {sign, static_cast<int>(idx)};
  return {0, -1};
}

// Full multivector product via the symbolic table.
inline spinflow::Multivector multiply(const spinflow::Multivector& a,
                                      const spinflow::Multivector& b) {
  spinflow::Multivector r;
  for (int i = 0; i < 8; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < 8; ++j) {
      if (b[j] == 0.0) continue;
      const auto [sign, blade] = blade_product(i, j);
      r[blade] += sign * a[i] * b[j];
    }
  }
  return r;
}

// exact symbols of the second-order stencils
inline double k_eff(double k, double h) { return std::sin(k * h) / h; }
inline double lambda_compact(double k, double h) { return (2.0 - 2.0 * std::cos(k * h)) / (h * h); }
inline double lambda_wide(double k, double h) { return k_eff(k, h) * k_eff(k, h); }

// amplification of y' = -lambda y under one RK4 step
inline double rk4_growth(double lambda, double dt) {
  const double z = -dt * lambda;
  return 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
}

}  // namespace oracles
