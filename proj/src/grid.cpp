#include "spinflow/grid.hpp"

#include <stdexcept>

namespace spinflow {

namespace {
void check_axis(int n, double length) {
  if (n < 8) throw std::invalid_argument("grid: need at least 8 nodes per axis");
  if (!(length > 0.0)) throw std::invalid_argument("grid: axis length must be positive");
}
}  // namespace

Grid make_grid_2d(int nx, int ny, double lx, double ly) {
  check_axis(nx, lx);
  check_axis(ny, ly);
  Grid g;
  g.dim = 2;
  g.n = {nx, ny, 1};
  g.length = {lx, ly, 1.0};
  g.h = {lx / nx, ly / ny, 0.0};
  return g;
}

Grid make_grid_3d(int nx, int ny, int nz, double lx, double ly, double lz) {
  check_axis(nx, lx);
  check_axis(ny, ly);
  check_axis(nz, lz);
  Grid g;
  g.dim = 3;
  g.n = {nx, ny, nz};
  g.length = {lx, ly, lz};
  g.h = {lx / nx, ly / ny, lz / nz};
  return g;
}

}  // namespace spinflow
