#include "spacenorm/lattice.hpp"

#include <cmath>

namespace spacenorm {

std::vector<std::vector<int>> lattice_ball_offsets(int d, double spacing, double t) {
  const int M = static_cast<int>(std::floor(t / spacing));
  const double t2 = t * t;
  std::vector<std::vector<int>> out;
  std::vector<int> m(d, -M);
  while (true) {
    double norm2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double h = m[i] * spacing;
      norm2 += h * h;
    }
    if (norm2 < t2) out.push_back(m);
    int axis = d - 1;
    while (axis >= 0 && m[axis] == M) {
      m[axis] = -M;
      --axis;
    }
    if (axis < 0) break;
    ++m[axis];
  }
  return out;
}

std::vector<std::size_t> ball_domain_samples(const GridFunction& g, std::span<const double> x,
                                             double t) {
  const int d = g.dim();
  const auto& grid = g.grid();

  // When x sits exactly on a node, measure distances as integer offsets
  // times the spacing. That is the arithmetic the field sweeps use, so
  // boundary nodes at distance exactly t classify identically on both paths.
  std::vector<int> anchor(d);
  bool on_node = true;
  for (int k = 0; k < d; ++k) {
    const int i = static_cast<int>(std::llround((x[k] - grid.origin[k]) / grid.spacing));
    anchor[k] = i;
    on_node = on_node && i >= 0 && i < grid.shape[k] &&
              grid.origin[k] + i * grid.spacing == x[k];
  }

  std::vector<int> lo(d), hi(d), idx(d);
  for (int k = 0; k < d; ++k) {
    lo[k] = std::max(0, static_cast<int>(std::ceil((x[k] - t - grid.origin[k]) / grid.spacing)));
    hi[k] = std::min(grid.shape[k] - 1,
                     static_cast<int>(std::floor((x[k] + t - grid.origin[k]) / grid.spacing)));
    if (hi[k] < lo[k]) return {};
  }
  const double t2 = t * t;
  std::vector<std::size_t> out;
  idx = lo;
  while (true) {
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) {
      const double dy = on_node ? (idx[k] - anchor[k]) * grid.spacing
                                : grid.origin[k] + idx[k] * grid.spacing - x[k];
      r2 += dy * dy;
    }
    if (r2 < t2) {
      const std::size_t f = g.flat_index(idx);
      if (!g.masked(f)) out.push_back(f);
    }
    int axis = d - 1;
    while (axis >= 0 && idx[axis] == hi[axis]) {
      idx[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
    ++idx[axis];
  }
  return out;
}

std::vector<std::size_t> cube_domain_samples(const GridFunction& g, const DyadicCube& cube) {
  const int d = g.dim();
  const auto& grid = g.grid();
  std::vector<int> lo(d), hi(d), idx(d);
  for (int k = 0; k < d; ++k) {
    const double clo = cube.corner_lo(k), chi = cube.corner_hi(k);
    lo[k] = std::max(0, static_cast<int>(std::ceil((clo - grid.origin[k]) / grid.spacing - 1e-9)));
    hi[k] = std::min(grid.shape[k] - 1,
                     static_cast<int>(std::floor((chi - grid.origin[k]) / grid.spacing + 1e-9)));
    if (hi[k] < lo[k]) return {};
  }
  std::vector<std::size_t> out;
  idx = lo;
  while (true) {
    bool inside = true;
    for (int k = 0; k < d && inside; ++k) {
      const double y = grid.origin[k] + idx[k] * grid.spacing;
      inside = y >= cube.corner_lo(k) && y < cube.corner_hi(k);
    }
    if (inside) {
      const std::size_t f = g.flat_index(idx);
      if (!g.masked(f)) out.push_back(f);
    }
    int axis = d - 1;
    while (axis >= 0 && idx[axis] == hi[axis]) {
      idx[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
    ++idx[axis];
  }
  return out;
}

}  // namespace spacenorm
