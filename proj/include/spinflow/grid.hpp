#pragma once

// Periodic structured grids in 2 or 3 dimensions. Nodes sit at x_i = i*h per
// axis and indices wrap modulo n. The x axis is fastest in the linear index.

#include <array>
#include <cstddef>

namespace spinflow {

struct Grid {
  int dim = 2;
  std::array<int, 3> n = {1, 1, 1};
  std::array<double, 3> length = {1.0, 1.0, 1.0};
  std::array<double, 3> h = {0.0, 0.0, 0.0};

  std::size_t num_nodes() const {
    return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]) *
           static_cast<std::size_t>(n[2]);
  }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= h[a];
    return v;
  }
  double volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= length[a];
    return v;
  }
  double min_h() const {
    double m = h[0];
    for (int a = 1; a < dim; ++a) m = (h[a] < m) ? h[a] : m;
    return m;
  }
  std::size_t index(int i, int j, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(n[1]) * static_cast<std::size_t>(k));
  }
  // coordinate of node index along an axis
  double coord(int i, int axis) const { return h[axis] * i; }

  bool same_shape(const Grid& o) const {
    return dim == o.dim && n == o.n && length == o.length;
  }
};

// Node counts must be >= 8 per axis (stencil validity); throws std::invalid_argument.
Grid make_grid_2d(int nx, int ny, double lx, double ly);
Grid make_grid_3d(int nx, int ny, int nz, double lx, double ly, double lz);

}  // namespace spinflow
