#pragma once

// Node-major field storage over a periodic grid: ncomp contiguous doubles per
// node, x axis fastest. Scalar fields have 1 component, spinor fields 4
// (s, b12, b13, b23), vector fields 3 (grade-1 components; z unused in 2D).

#include <cstddef>
#include <vector>

#include "spinflow/clifford.hpp"
#include "spinflow/grid.hpp"

namespace spinflow {

class Field {
 public:
  Field() = default;
  Field(const Grid& grid, int ncomp)
      : grid_(grid), ncomp_(ncomp), v_(grid.num_nodes() * static_cast<std::size_t>(ncomp), 0.0) {}

  const Grid& grid() const { return grid_; }
  int ncomp() const { return ncomp_; }
  std::size_t num_nodes() const { return grid_.num_nodes(); }
  std::size_t size() const { return v_.size(); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  double& at(std::size_t node, int c) { return v_[node * ncomp_ + c]; }
  double at(std::size_t node, int c) const { return v_[node * ncomp_ + c]; }

  EvenSpinor spinor(std::size_t node) const {
    const double* p = v_.data() + node * 4;
    return {p[0], p[1], p[2], p[3]};
  }
  void set_spinor(std::size_t node, const EvenSpinor& s) {
    double* p = v_.data() + node * 4;
    p[0] = s.s; p[1] = s.b12; p[2] = s.b13; p[3] = s.b23;
  }

  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

 private:
  Grid grid_;
  int ncomp_ = 1;
  std::vector<double> v_;
};

inline Field make_scalar_field(const Grid& g) { return Field(g, 1); }
inline Field make_spinor_field(const Grid& g) { return Field(g, 4); }
inline Field make_vector_field(const Grid& g) { return Field(g, 3); }

using ScalarField = Field;
using SpinorField = Field;
using VectorField = Field;

}  // namespace spinflow
